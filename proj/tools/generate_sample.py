#!/usr/bin/env python3
"""Generate the bundled synthetic hourly price sample.

The series covers 2013-01-01 00:00 to 2014-12-31 23:00 Central European wall
clock time, written with the UTC offset in force (+01:00 in winter, +02:00
in summer). DST transitions appear exactly as an exchange would publish them:
the spring-forward day has 23 rows, the fall-back day repeats the 02:00 hour
with both offsets.

Price model (EUR/MWh) on the local wall clock:

    price = level + yearly + weekday + hourly_shape + ou + jump + noise

    level         42
    yearly        6 cos(2 pi (doy - 15) / 365)    winter peak
    weekday       Mon..Fri +2, Sat -6, Sun -10
    hourly_shape  morning and evening peaks, night trough, amplitude ~10
    ou            daily AR(1) on the day level, phi = 0.85, innovation sd 3.5
    jump          with probability 0.03 per day, an extra day level drawn
                  from N(18, 6), halving each following day
    noise         hourly Gaussian noise, sd 1.5

Usage: generate_sample.py [output.csv] [--seed N]   (default seed 20190329)
"""

import argparse
import datetime as dt
import math
import random


def last_sunday(year, month):
    day = dt.date(year, month + 1, 1) - dt.timedelta(days=1) if month < 12 else dt.date(year, 12, 31)
    while day.weekday() != 6:
        day -= dt.timedelta(days=1)
    return day


def utc_offset_hours(utc):
    """+2 between 01:00 UTC on the last Sunday of March and October, else +1."""
    start = dt.datetime.combine(last_sunday(utc.year, 3), dt.time(1))
    end = dt.datetime.combine(last_sunday(utc.year, 10), dt.time(1))
    return 2 if start <= utc < end else 1


HOURLY_SHAPE = [
    -8.0, -9.5, -10.5, -11.0, -10.5, -8.0, -3.0, 3.0, 6.5, 7.0, 6.0, 5.5,
    4.5, 3.0, 2.0, 1.5, 2.5, 5.0, 8.5, 9.0, 6.0, 2.5, -1.0, -4.5,
]
WEEKDAY = [2.0, 2.0, 2.0, 2.0, 2.0, -6.0, -10.0]


def generate(seed):
    rng = random.Random(seed)
    utc = dt.datetime(2012, 12, 31, 23)
    end = dt.datetime(2014, 12, 31, 23)
    day_state = {}
    ou = 0.0
    jump = 0.0
    rows = []
    while utc < end:
        offset = utc_offset_hours(utc)
        local = utc + dt.timedelta(hours=offset)
        day = local.date()
        if day not in day_state:
            ou = 0.85 * ou + rng.gauss(0.0, 3.5)
            jump *= 0.5
            if rng.random() < 0.03:
                jump += rng.gauss(18.0, 6.0)
            doy = day.timetuple().tm_yday
            yearly = 6.0 * math.cos(2.0 * math.pi * (doy - 15) / 365.0)
            day_state[day] = 42.0 + yearly + WEEKDAY[day.weekday()] + ou + jump
        price = day_state[day] + HOURLY_SHAPE[local.hour] + rng.gauss(0.0, 1.5)
        stamp = local.strftime("%Y-%m-%dT%H:00:00") + "+%02d:00" % offset
        rows.append("%s,%.2f" % (stamp, price))
        utc += dt.timedelta(hours=1)
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("output", nargs="?", default="data/sample_prices.csv")
    parser.add_argument("--seed", type=int, default=20190329)
    args = parser.parse_args()
    rows = generate(args.seed)
    with open(args.output, "w", newline="\n") as f:
        f.write("timestamp,price\n")
        f.write("\n".join(rows))
        f.write("\n")


if __name__ == "__main__":
    main()
