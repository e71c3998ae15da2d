#pragma once

#include <cstdint>

namespace spotcast {

/// Hours since 1970-01-01T00:00 on the series' wall clock.
using HourStamp = std::int64_t;
/// Days since 1970-01-01.
using DayStamp = std::int64_t;

/// Calendar view of a single hour. Day-of-week numbering is fixed Monday=1 .. Sunday=7.
struct TimePoint {
    HourStamp instant = 0;
    int year = 1970;
    int month = 1;
    int day_of_month = 1;
    int day_of_week = 4;
    int hour = 0;
    /// Elapsed fraction of the calendar year, hours since Jan 1 00:00 over 8760 (8784 in leap years).
    double year_fraction = 0.0;

    [[nodiscard]] static TimePoint from_stamp(HourStamp stamp);
    [[nodiscard]] DayStamp day() const noexcept;
};

[[nodiscard]] bool is_leap_year(int year) noexcept;
[[nodiscard]] int days_in_year(int year) noexcept;
[[nodiscard]] int hours_in_year(int year) noexcept;

[[nodiscard]] DayStamp days_from_civil(int year, int month, int day) noexcept;
[[nodiscard]] HourStamp hour_stamp(int year, int month, int day, int hour) noexcept;

/// Monday=1 .. Sunday=7.
[[nodiscard]] int day_of_week(DayStamp day) noexcept;
[[nodiscard]] int year_of(DayStamp day) noexcept;
/// Zero-based day of the year.
[[nodiscard]] int day_of_year(DayStamp day) noexcept;

[[nodiscard]] constexpr DayStamp day_of(HourStamp stamp) noexcept {
    return stamp >= 0 ? stamp / 24 : (stamp - 23) / 24;
}
[[nodiscard]] constexpr int hour_of(HourStamp stamp) noexcept {
    return static_cast<int>(stamp - day_of(stamp) * 24);
}

}  // namespace spotcast
