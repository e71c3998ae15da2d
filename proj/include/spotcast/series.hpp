#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spotcast/calendar.hpp"

namespace spotcast {

/**
 * Hourly spot prices on a gap-free wall-clock grid.
 *
 * The grid is implicit: point i sits at start() + i hours, so the
 * strictly-increasing one-hour spacing holds by construction. Prices are
 * EUR/MWh, must be finite and may be negative.
 */
class HourlySeries {
public:
    HourlySeries() = default;
    HourlySeries(HourStamp start, std::vector<double> prices, int utc_offset_minutes = 60);

    [[nodiscard]] std::size_t size() const noexcept { return prices_.size(); }
    [[nodiscard]] bool empty() const noexcept { return prices_.empty(); }

    [[nodiscard]] HourStamp start() const noexcept { return start_; }
    /// One past the last stamp.
    [[nodiscard]] HourStamp end() const noexcept {
        return start_ + static_cast<HourStamp>(prices_.size());
    }
    [[nodiscard]] HourStamp stamp(std::size_t i) const noexcept {
        return start_ + static_cast<HourStamp>(i);
    }
    [[nodiscard]] TimePoint time(std::size_t i) const { return TimePoint::from_stamp(stamp(i)); }
    [[nodiscard]] double price(std::size_t i) const { return prices_.at(i); }
    [[nodiscard]] std::span<const double> prices() const noexcept { return prices_; }

    [[nodiscard]] bool contains(HourStamp stamp) const noexcept {
        return stamp >= start_ && stamp < end();
    }
    [[nodiscard]] std::optional<std::size_t> index_of(HourStamp stamp) const noexcept;

    /// Offset written next to each timestamp on serialization.
    [[nodiscard]] int utc_offset_minutes() const noexcept { return utc_offset_minutes_; }

    /// Points with stamps in [from, to), clamped to the series span.
    [[nodiscard]] HourlySeries window(HourStamp from, HourStamp to) const;

    friend bool operator==(const HourlySeries&, const HourlySeries&) = default;

private:
    HourStamp start_ = 0;
    std::vector<double> prices_;
    int utc_offset_minutes_ = 60;
};

/// One value per consecutive calendar day.
struct DailySeries {
    DayStamp start = 0;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] DayStamp day(std::size_t i) const noexcept {
        return start + static_cast<DayStamp>(i);
    }
    [[nodiscard]] int day_of_week(std::size_t i) const noexcept {
        return spotcast::day_of_week(day(i));
    }
};

/// Model output aligned 1:1 with a horizon of hourly stamps.
struct ForecastResult {
    std::string model_id;
    std::vector<HourStamp> horizon;
    std::vector<double> values;
    std::optional<std::vector<double>> lower;
    std::optional<std::vector<double>> upper;
    std::map<std::string, std::string> metadata;

    /// Throws std::invalid_argument when lengths disagree or a band excludes its value.
    void validate() const;
};

struct PointError {
    HourStamp stamp = 0;
    /// actual - forecast
    double error = 0.0;
};

struct ErrorReport {
    double mae = 0.0;
    double rmse = 0.0;
    /// Percent; absent when any actual value is zero.
    std::optional<double> mape;
    std::vector<PointError> per_point;
};

/// Mean of each complete 24-hour day; partial first/last days are dropped.
[[nodiscard]] DailySeries daily_average(const HourlySeries& series);

/// Half-open split: train holds stamps < cutoff, test the rest. Both must be non-empty.
[[nodiscard]] std::pair<HourlySeries, HourlySeries> split(const HourlySeries& series,
                                                          HourStamp cutoff);

/// MAE, RMSE and MAPE of forecast against actual. Per-point stamps are 0..n-1.
[[nodiscard]] ErrorReport compute_metrics(std::span<const double> actual,
                                          std::span<const double> forecast);
/// As above with per-point errors keyed by the given stamps.
[[nodiscard]] ErrorReport compute_metrics(std::span<const double> actual,
                                          std::span<const double> forecast,
                                          std::span<const HourStamp> stamps);

}  // namespace spotcast
