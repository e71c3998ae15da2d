#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spotcast/series.hpp"

namespace spotcast::models {

using Json = nlohmann::json;

/// A forecasting model behind a uniform fit/forecast interface.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    [[nodiscard]] virtual std::string id() const = 0;
    /// Fits on history and describes the result as {"model", "params", "fit_diagnostics"}.
    [[nodiscard]] virtual Json fit(const HourlySeries& history, std::uint64_t seed) const = 0;
    /// Fits on history, then forecasts the horizon_days * 24 hours that follow it.
    /// history must end at a day boundary.
    [[nodiscard]] virtual ForecastResult forecast(const HourlySeries& history, int horizon_days,
                                                  std::uint64_t seed) const = 0;
};

using Factory = std::function<std::unique_ptr<Forecaster>(const Json& config)>;

class UnknownModelError : public std::invalid_argument {
public:
    UnknownModelError(const std::string& name, const std::vector<std::string>& known);
};

class Registry {
public:
    /// Registers or replaces a model.
    void add(const std::string& name, Factory factory);
    [[nodiscard]] bool contains(const std::string& name) const;
    /// Sorted names.
    [[nodiscard]] std::vector<std::string> names() const;
    /// Throws UnknownModelError listing the registered names.
    [[nodiscard]] std::unique_ptr<Forecaster> create(const std::string& name,
                                                     const Json& config = Json::object()) const;

    /// naive, fourier, linear, arma, garch, mrjd, ann.
    [[nodiscard]] static Registry builtin();

private:
    std::map<std::string, Factory> factories_;
};

/// Mean deviation of each hour from its day's average over the last profile_days full days.
[[nodiscard]] std::array<double, 24> intraday_profile(const HourlySeries& history,
                                                      int profile_days = 28);

/// Hourly forecast from daily levels: level of the day plus the hour's profile offset.
[[nodiscard]] ForecastResult broadcast_daily(const std::string& model_id, DayStamp first_day,
                                             std::span<const double> daily,
                                             const std::array<double, 24>& profile);

}  // namespace spotcast::models
