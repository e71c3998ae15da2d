#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spotcast/models.hpp"
#include "spotcast/series.hpp"

namespace spotcast::backtest {

enum class Granularity { hourly, daily };

struct ModelSpec {
    std::string id;
    models::Json config = models::Json::object();
};

/// Train on [train_start, test_start), score on [test_start, test_end). Stamps are day-aligned.
struct BacktestSpec {
    std::vector<ModelSpec> models;
    HourStamp train_start = 0;
    HourStamp test_start = 0;
    HourStamp test_end = 0;
    Granularity granularity = Granularity::daily;
    std::uint64_t seed = 0;
    std::vector<std::string> hybrid_members{"fourier", "garch", "mrjd"};
    /// Models fitted concurrently; results do not depend on it.
    unsigned threads = 1;

    /// Last test_days whole days for testing, every earlier whole day for training.
    [[nodiscard]] static BacktestSpec default_for(const HourlySeries& data, std::uint64_t seed,
                                                  int test_days = 28);
    /// Checks ordering, day alignment, and coverage by data; throws std::invalid_argument.
    void validate(const HourlySeries& data) const;
};

struct ModelOutcome {
    std::string model_id;
    bool ok = false;
    std::string error;
    std::optional<ErrorReport> report;
    /// Hourly forecast over the test window.
    std::optional<ForecastResult> forecast;
    double runtime_seconds = 0.0;
};

struct BacktestReport {
    std::vector<ModelOutcome> models;
    ModelOutcome hybrid;
    /// Model ids then "hybrid", by RMSE; failures last; ties alphabetical.
    std::vector<std::string> ranking;
    bool partial = false;
    Granularity granularity = Granularity::daily;
    /// Scored actuals and their stamps (midnights when daily).
    std::vector<HourStamp> stamps;
    std::vector<double> actual;
    /// Hourly actuals over the test window.
    HourlySeries test;
};

/**
 * Fits every model on the training slice only, forecasts the test window,
 * and scores at the configured granularity. A throwing model is recorded and the
 * rest continue. The hybrid averages the configured members that succeeded.
 */
[[nodiscard]] BacktestReport run_backtest(const BacktestSpec& spec, const HourlySeries& data,
                                          const models::Registry& registry);

/// ModelOutcome scoring helper: averages hourly values into days when daily.
[[nodiscard]] std::vector<double> aggregate(std::span<const double> hourly, Granularity g);

[[nodiscard]] std::string to_string(Granularity g);
[[nodiscard]] Granularity granularity_from_string(const std::string& s);

/// JSON report; runtimes are included only when with_timings is set so the default is reproducible.
[[nodiscard]] models::Json to_json(const BacktestReport& report, int utc_offset_minutes,
                                   bool with_timings = false);

/// Line chart of the scored actuals and every successful forecast, hybrid last.
[[nodiscard]] std::string forecast_chart_svg(const BacktestReport& report);
/// Bar chart of RMSE per model and the hybrid; failures show as n/a.
[[nodiscard]] std::string rmse_chart_svg(const BacktestReport& report);

}  // namespace spotcast::backtest
