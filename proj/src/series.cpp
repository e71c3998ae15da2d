#include "spotcast/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spotcast {

HourlySeries::HourlySeries(HourStamp start, std::vector<double> prices, int utc_offset_minutes)
    : start_(start), prices_(std::move(prices)), utc_offset_minutes_(utc_offset_minutes) {
    for (std::size_t i = 0; i < prices_.size(); ++i) {
        if (!std::isfinite(prices_[i])) {
            throw std::invalid_argument("non-finite price at index " + std::to_string(i));
        }
    }
}

std::optional<std::size_t> HourlySeries::index_of(HourStamp stamp) const noexcept {
    if (!contains(stamp)) return std::nullopt;
    return static_cast<std::size_t>(stamp - start_);
}

HourlySeries HourlySeries::window(HourStamp from, HourStamp to) const {
    const HourStamp lo = std::clamp(from, start_, end());
    const HourStamp hi = std::clamp(to, lo, end());
    const auto first = prices_.begin() + (lo - start_);
    const auto last = prices_.begin() + (hi - start_);
    return HourlySeries(lo, std::vector<double>(first, last), utc_offset_minutes_);
}

void ForecastResult::validate() const {
    if (values.size() != horizon.size()) {
        throw std::invalid_argument("forecast '" + model_id + "': " +
                                    std::to_string(values.size()) + " values for " +
                                    std::to_string(horizon.size()) + " horizon points");
    }
    if (lower.has_value() != upper.has_value()) {
        throw std::invalid_argument("forecast '" + model_id + "': bands must come in pairs");
    }
    if (lower) {
        if (lower->size() != values.size() || upper->size() != values.size()) {
            throw std::invalid_argument("forecast '" + model_id + "': band length mismatch");
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!((*lower)[i] <= values[i] && values[i] <= (*upper)[i])) {
                throw std::invalid_argument("forecast '" + model_id +
                                            "': band excludes value at index " +
                                            std::to_string(i));
            }
        }
    }
}

DailySeries daily_average(const HourlySeries& series) {
    if (series.empty()) throw std::invalid_argument("daily_average: empty series");

    // First full day starts at the first stamp with hour 0.
    const HourStamp first = series.start();
    const HourStamp aligned = day_of(first) * 24 == first ? first : (day_of(first) + 1) * 24;

    DailySeries out;
    out.start = day_of(aligned);
    const auto prices = series.prices();
    for (HourStamp day_start = aligned; day_start + 24 <= series.end(); day_start += 24) {
        const auto offset = static_cast<std::size_t>(day_start - first);
        double sum = 0.0;
        for (std::size_t h = 0; h < 24; ++h) sum += prices[offset + h];
        out.values.push_back(sum / 24.0);
    }
    return out;
}

std::pair<HourlySeries, HourlySeries> split(const HourlySeries& series, HourStamp cutoff) {
    if (series.empty() || cutoff <= series.start() || cutoff >= series.end()) {
        throw std::invalid_argument("split: cutoff " + std::to_string(cutoff) +
                                    " outside series span [" + std::to_string(series.start()) +
                                    ", " + std::to_string(series.end()) + ")");
    }
    return {series.window(series.start(), cutoff), series.window(cutoff, series.end())};
}

ErrorReport compute_metrics(std::span<const double> actual, std::span<const double> forecast) {
    std::vector<HourStamp> stamps(actual.size());
    for (std::size_t i = 0; i < stamps.size(); ++i) stamps[i] = static_cast<HourStamp>(i);
    return compute_metrics(actual, forecast, stamps);
}

ErrorReport compute_metrics(std::span<const double> actual, std::span<const double> forecast,
                            std::span<const HourStamp> stamps) {
    if (actual.size() != forecast.size() || actual.size() != stamps.size()) {
        throw std::invalid_argument("compute_metrics: length mismatch (" +
                                    std::to_string(actual.size()) + " actual, " +
                                    std::to_string(forecast.size()) + " forecast)");
    }
    if (actual.empty()) throw std::invalid_argument("compute_metrics: empty input");

    ErrorReport report;
    report.per_point.reserve(actual.size());
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    double pct_sum = 0.0;
    bool has_zero = false;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - forecast[i];
        report.per_point.push_back({stamps[i], e});
        abs_sum += std::abs(e);
        sq_sum += e * e;
        if (actual[i] == 0.0) {
            has_zero = true;
        } else {
            pct_sum += std::abs(e) / std::abs(actual[i]);
        }
    }
    const auto n = static_cast<double>(actual.size());
    report.mae = abs_sum / n;
    report.rmse = std::sqrt(sq_sum / n);
    // sqrt rounding can land one ulp under the mean on equal-magnitude errors.
    report.rmse = std::max(report.rmse, report.mae);
    if (!has_zero) report.mape = 100.0 * pct_sum / n;
    return report;
}

}  // namespace spotcast
