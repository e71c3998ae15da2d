#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "spotcast/seasonal.hpp"
#include "spotcast/series.hpp"

namespace spotcast::baseline {

/**
 * Naive weekday rule over whole days.
 *
 * Saturday and Sunday copy the same day last week, Friday averages
 * yesterday and last week, Monday averages last Friday (d-3) and last week,
 * every other day copies yesterday. Beyond seven days the rule consumes its
 * own forecasts; the result metadata then carries `recursive=true`.
 *
 * History must end at a day boundary and hold at least 8 full days.
 */
[[nodiscard]] ForecastResult naive_forecast(const HourlySeries& history, int horizon_days);

/// One hour of the naive rule for a day with the given weekday (Monday=1).
[[nodiscard]] double naive_rule(int day_of_week, double prev_day, double three_days_back,
                                double prev_week);

struct FourierForecastConfig {
    /// Weight of each yearly harmonic fit, keyed by years before the target year
    /// (1 = previous year). Normalized by the sum of weights.
    std::map<int, double> year_lag_weights{{7, 1.0}, {6, 1.0}, {5, 1.0}, {4, 10.0},
                                           {3, 1.0}, {2, 1.0}, {1, 5.0}};
    /// Weights of z1 (yearly fits), z2 (same-weekday reference), z3 (week lag).
    std::array<double, 3> combination_weights{20.0, 70.0, 10.0};
    /// Multiplier applied to z4 before it is subtracted.
    double trend_halving = 0.5;
    int weekday_window_days = 14;
    int harmonic_order = 8;
    /// z4 compares the latest full year with this many years before it.
    int trend_reference_offset = 3;
    bool use_trend = true;

    [[nodiscard]] double year_weight_normalizer() const;
    [[nodiscard]] double combination_normalizer() const;
    /// Throws std::invalid_argument on negative or all-zero weights.
    void validate() const;
};

struct FourierComponents {
    double z1 = 0.0;
    double z2 = 0.0;
    double z3 = 0.0;
    double z4 = 0.0;
};

/// Years fully covered (every hour of Jan 1 .. Dec 31) by the series.
[[nodiscard]] std::vector<int> full_years(const HourlySeries& series);

/// Harmonic fit of each listed year's hourly prices against year_fraction (period 1).
[[nodiscard]] std::map<int, seasonal::HarmonicFit> fit_yearly_harmonics(
    const HourlySeries& history, std::span<const int> years, int order);

/// Weighted mean of the yearly fits evaluated at target's year position.
[[nodiscard]] double z1_yearly_component(const std::map<int, seasonal::HarmonicFit>& fits,
                                         const FourierForecastConfig& config,
                                         const TimePoint& target);

/// Mean price at the same hour and weekday within +-window_days of target's
/// position in every earlier year.
[[nodiscard]] double z2_weekday_reference(const HourlySeries& history, const TimePoint& target,
                                          int window_days);

/// Value 168 hours before index i of the running solution (history followed by forecasts).
[[nodiscard]] double z3_week_lag(std::span<const double> solution, std::size_t i);

/// Mean of (latest_full_year - reference_offset) minus mean of latest_full_year.
[[nodiscard]] double z4_trend(const HourlySeries& history, int latest_full_year,
                              int reference_offset = 3);

/// (w1 z1 + w2 z2 + w3 z3) / (w1 + w2 + w3) - trend_halving * z4
[[nodiscard]] double combine_components(const FourierComponents& z,
                                        const FourierForecastConfig& config);

/// Hourly forecast for the horizon_hours following history.
[[nodiscard]] ForecastResult fourier_forecast(const HourlySeries& history,
                                              const FourierForecastConfig& config,
                                              std::size_t horizon_hours);

/// Keeps only year lags present in history and drops z4 when its reference year is missing.
[[nodiscard]] FourierForecastConfig adapt_to_history(const FourierForecastConfig& config,
                                                     const HourlySeries& history);

}  // namespace spotcast::baseline
