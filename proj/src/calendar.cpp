#include "spotcast/calendar.hpp"

#include <chrono>

namespace spotcast {

namespace {

std::chrono::year_month_day civil(DayStamp day) {
    return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{day}}};
}

}  // namespace

bool is_leap_year(int year) noexcept { return std::chrono::year{year}.is_leap(); }

int days_in_year(int year) noexcept { return is_leap_year(year) ? 366 : 365; }

int hours_in_year(int year) noexcept { return 24 * days_in_year(year); }

DayStamp days_from_civil(int year, int month, int day) noexcept {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{static_cast<unsigned>(month)},
                                          std::chrono::day{static_cast<unsigned>(day)}};
    return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

HourStamp hour_stamp(int year, int month, int day, int hour) noexcept {
    return days_from_civil(year, month, day) * 24 + hour;
}

int day_of_week(DayStamp day) noexcept {
    return static_cast<int>(
        std::chrono::weekday{std::chrono::sys_days{std::chrono::days{day}}}.iso_encoding());
}

int year_of(DayStamp day) noexcept { return static_cast<int>(civil(day).year()); }

int day_of_year(DayStamp day) noexcept {
    return static_cast<int>(day - days_from_civil(year_of(day), 1, 1));
}

TimePoint TimePoint::from_stamp(HourStamp stamp) {
    const DayStamp d = day_of(stamp);
    const auto ymd = civil(d);
    TimePoint tp;
    tp.instant = stamp;
    tp.year = static_cast<int>(ymd.year());
    tp.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
    tp.day_of_month = static_cast<int>(static_cast<unsigned>(ymd.day()));
    tp.day_of_week = spotcast::day_of_week(d);
    tp.hour = hour_of(stamp);
    const HourStamp year_start = days_from_civil(tp.year, 1, 1) * 24;
    tp.year_fraction =
        static_cast<double>(stamp - year_start) / static_cast<double>(hours_in_year(tp.year));
    return tp;
}

DayStamp TimePoint::day() const noexcept { return day_of(instant); }

}  // namespace spotcast
