#include <doctest.h>

#include <chrono>
#include <initializer_list>

#include "spotcast/calendar.hpp"

using namespace spotcast;

TEST_CASE("civil days agree with std::chrono") {
    namespace c = std::chrono;
    for (int y : {1900, 1970, 1999, 2000, 2012, 2013, 2100}) {
        for (unsigned m = 1; m <= 12; ++m) {
            const c::year_month_day ymd{c::year{y}, c::month{m}, c::day{1}};
            const auto expect = c::sys_days{ymd}.time_since_epoch().count();
            CHECK(days_from_civil(y, static_cast<int>(m), 1) == expect);
            const c::weekday wd{c::sys_days{ymd}};
            CHECK(day_of_week(expect) == static_cast<int>(wd.iso_encoding()));
        }
    }
}

TEST_CASE("weekday numbering starts on Monday") {
    CHECK(day_of_week(days_from_civil(2013, 1, 7)) == 1);   // Monday
    CHECK(day_of_week(days_from_civil(2013, 1, 11)) == 5);  // Friday
    CHECK(day_of_week(days_from_civil(2013, 1, 13)) == 7);  // Sunday
    CHECK(day_of_week(0) == 4);                             // 1970-01-01 was a Thursday
}

TEST_CASE("time point fields") {
    const auto tp = TimePoint::from_stamp(hour_stamp(2012, 3, 1, 13));
    CHECK(tp.year == 2012);
    CHECK(tp.month == 3);
    CHECK(tp.day_of_month == 1);
    CHECK(tp.hour == 13);
    CHECK(tp.day_of_week == 4);
    // Jan (31) + Feb (29) days, then 13 hours, over a leap year.
    CHECK(tp.year_fraction == doctest::Approx((60.0 * 24 + 13) / 8784.0).epsilon(1e-15));
    CHECK(tp.day() == days_from_civil(2012, 3, 1));
}

TEST_CASE("year fraction spans [0, 1)") {
    CHECK(TimePoint::from_stamp(hour_stamp(2013, 1, 1, 0)).year_fraction == 0.0);
    CHECK(TimePoint::from_stamp(hour_stamp(2013, 12, 31, 23)).year_fraction ==
          doctest::Approx(8759.0 / 8760.0));
    CHECK(TimePoint::from_stamp(hour_stamp(2012, 12, 31, 23)).year_fraction ==
          doctest::Approx(8783.0 / 8784.0));
}

TEST_CASE("leap years and negative stamps") {
    CHECK(is_leap_year(2000));
    CHECK_FALSE(is_leap_year(1900));
    CHECK(is_leap_year(2012));
    CHECK(hours_in_year(2013) == 8760);
    CHECK(hours_in_year(2016) == 8784);
    CHECK(day_of(-1) == -1);
    CHECK(hour_of(-1) == 23);
    CHECK(day_of_year(days_from_civil(2013, 12, 31)) == 364);
    CHECK(year_of(days_from_civil(1969, 12, 31)) == 1969);
}
