#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spotcast/ann.hpp"
#include "spotcast/series.hpp"

namespace spotcast::ann {

struct FeatureConfig {
    /// Entries taken from each lagged day; 24 keeps every hour, fewer samples the day evenly.
    std::size_t profile_hours = 24;
    bool use_load = false;

    void validate() const;
};

/// 3 lagged day profiles, one-hot weekday (7), hour / 23, optional load and load change.
[[nodiscard]] std::size_t feature_dim(const FeatureConfig& config);

struct FeatureSet {
    Dataset data;  ///< unstandardized
    std::vector<HourStamp> stamps;
    /// (day, hour) rows in range skipped for missing lags, targets, or load.
    std::size_t dropped_rows = 0;
};

/**
 * One row per (day, hour) for target days in [first_day, last_day).
 *
 * Lags are the same hour profile of days d-1, d-7, d-14. A row is kept only
 * when all three lag days and the target hour lie inside history (and load
 * covers the hour and the one before it, when used). Throws when nothing
 * is left.
 */
[[nodiscard]] FeatureSet build_features(const HourlySeries& history, const HourlySeries* load,
                                        const FeatureConfig& config, DayStamp first_day,
                                        DayStamp last_day);
/// Every day of history as a target candidate.
[[nodiscard]] FeatureSet build_features(const HourlySeries& history, const HourlySeries* load,
                                        const FeatureConfig& config);

/// Per-column affine map to zero mean and unit variance; zero-variance columns map to 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;  ///< population sd; 0 marks a constant column

    [[nodiscard]] static Standardizer fit(std::span<const double> rows, std::size_t dim);
    [[nodiscard]] std::size_t dim() const noexcept { return mean.size(); }
    void apply(std::span<double> row) const;
    /// Inverse for non-degenerate columns; constant columns return their mean.
    void invert(std::span<double> row) const;
};

/// Weekday-modulated daily sinusoid plus Gaussian noise, for exercising the load inputs.
[[nodiscard]] HourlySeries synthetic_load(HourStamp start, std::size_t hours, std::uint64_t seed);

struct AnnForecasterConfig {
    FeatureConfig features;
    std::vector<std::size_t> hidden{150, 20};
    TrainConfig train{};
    /// Most recent target days used for training; 0 uses all.
    std::size_t train_days = 0;
};

struct AnnModel {
    FeatureConfig features;
    Network network;
    Standardizer inputs;
    double target_mean = 0.0;
    double target_scale = 1.0;
    TrainConfig train_config;
    TrainTrace trace;
    std::size_t dropped_rows = 0;
};

/// Builds features from history, standardizes on the training rows, trains.
[[nodiscard]] AnnModel fit_ann(const HourlySeries& history, const HourlySeries* load,
                               const AnnForecasterConfig& config);

/// Network output for one raw feature row, in price units.
[[nodiscard]] double predict_row(const AnnModel& model, std::span<const double> raw_features);

/**
 * Day-by-day hourly forecast following history, which must end at a day
 * boundary. Forecast days feed later days' lag features.
 */
[[nodiscard]] ForecastResult ann_forecast(const AnnModel& model, const HourlySeries& history,
                                          const HourlySeries* load, int horizon_days);

}  // namespace spotcast::ann
