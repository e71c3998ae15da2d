#include "spotcast/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spotcast::baseline {

double naive_rule(int day_of_week, double prev_day, double three_days_back, double prev_week) {
    if (day_of_week < 1 || day_of_week > 7) {
        throw std::invalid_argument("naive_rule: day of week must be 1..7");
    }
    switch (day_of_week) {
        case 6:
        case 7: return prev_week;
        case 5: return 0.5 * (prev_day + prev_week);
        case 1: return 0.5 * (three_days_back + prev_week);
        default: return prev_day;
    }
}

ForecastResult naive_forecast(const HourlySeries& history, int horizon_days) {
    if (horizon_days < 1) throw std::invalid_argument("naive_forecast: horizon_days must be >= 1");
    if (history.empty() || history.end() % 24 != 0) {
        throw std::invalid_argument("naive_forecast: history must end at a day boundary");
    }
    const HourStamp first_full = (history.start() % 24 == 0)
                                     ? history.start()
                                     : (day_of(history.start()) + 1) * 24;
    const auto full_days = static_cast<std::size_t>((history.end() - first_full) / 24);
    if (full_days < 8) {
        throw std::invalid_argument("naive_forecast: need at least 8 full days of history, got " +
                                    std::to_string(full_days));
    }

    // days[d * 24 + s]; history first, then forecasts as they are produced.
    const auto offset = static_cast<std::size_t>(first_full - history.start());
    std::vector<double> days(history.prices().begin() + static_cast<std::ptrdiff_t>(offset),
                             history.prices().end());
    const DayStamp first_day = day_of(first_full);

    ForecastResult fc;
    fc.model_id = "naive";
    for (int k = 0; k < horizon_days; ++k) {
        const std::size_t d = full_days + static_cast<std::size_t>(k);
        const int dow = day_of_week(first_day + static_cast<DayStamp>(d));
        for (std::size_t s = 0; s < 24; ++s) {
            const double v = naive_rule(dow, days[(d - 1) * 24 + s], days[(d - 3) * 24 + s],
                                        days[(d - 7) * 24 + s]);
            days.push_back(v);
            fc.horizon.push_back(history.end() + static_cast<HourStamp>(k * 24 + s));
            fc.values.push_back(v);
        }
    }
    fc.metadata["recursive"] = horizon_days > 7 ? "true" : "false";
    if (horizon_days > 7) {
        fc.metadata["note"] = "days beyond the first week are built from earlier forecasts";
    }
    return fc;
}

double FourierForecastConfig::year_weight_normalizer() const {
    double s = 0.0;
    for (const auto& [lag, w] : year_lag_weights) s += w;
    return s;
}

double FourierForecastConfig::combination_normalizer() const {
    return combination_weights[0] + combination_weights[1] + combination_weights[2];
}

void FourierForecastConfig::validate() const {
    for (const auto& [lag, w] : year_lag_weights) {
        if (lag < 1) throw std::invalid_argument("fourier config: year lag must be >= 1");
        if (!(w >= 0.0)) throw std::invalid_argument("fourier config: negative year weight");
    }
    for (double w : combination_weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("fourier config: negative combination weight");
    }
    if (!(combination_normalizer() > 0.0)) {
        throw std::invalid_argument("fourier config: combination weights sum to zero");
    }
    if (!(combination_weights[0] == 0.0 || year_weight_normalizer() > 0.0)) {
        throw std::invalid_argument("fourier config: year weights sum to zero");
    }
    if (weekday_window_days < 0) throw std::invalid_argument("fourier config: negative window");
    if (harmonic_order < 1) throw std::invalid_argument("fourier config: harmonic order < 1");
    if (trend_reference_offset < 1) {
        throw std::invalid_argument("fourier config: trend reference offset must be >= 1");
    }
}

std::vector<int> full_years(const HourlySeries& series) {
    std::vector<int> years;
    if (series.empty()) return years;
    const int first = TimePoint::from_stamp(series.start()).year;
    const int last = TimePoint::from_stamp(series.end() - 1).year;
    for (int y = first; y <= last; ++y) {
        if (series.contains(hour_stamp(y, 1, 1, 0)) && series.contains(hour_stamp(y, 12, 31, 23))) {
            years.push_back(y);
        }
    }
    return years;
}

std::map<int, seasonal::HarmonicFit> fit_yearly_harmonics(const HourlySeries& history,
                                                          std::span<const int> years, int order) {
    std::map<int, seasonal::HarmonicFit> fits;
    for (int y : years) {
        const HourStamp from = hour_stamp(y, 1, 1, 0);
        const HourStamp to = hour_stamp(y + 1, 1, 1, 0);
        if (!history.contains(from) || !history.contains(to - 1)) {
            throw std::invalid_argument("fit_yearly_harmonics: year " + std::to_string(y) +
                                        " not fully covered");
        }
        const auto first = *history.index_of(from);
        const auto n = static_cast<std::size_t>(to - from);
        std::vector<double> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = static_cast<double>(i) / static_cast<double>(n);
        }
        fits.emplace(y, seasonal::fit_harmonics(t, history.prices().subspan(first, n), order, 1.0));
    }
    return fits;
}

double z1_yearly_component(const std::map<int, seasonal::HarmonicFit>& fits,
                           const FourierForecastConfig& config, const TimePoint& target) {
    double sum = 0.0;
    double weight_sum = 0.0;
    for (const auto& [lag, w] : config.year_lag_weights) {
        if (w == 0.0) continue;
        const int year = target.year - lag;
        const auto it = fits.find(year);
        if (it == fits.end()) {
            throw std::invalid_argument("z1: no harmonic fit for year " + std::to_string(year));
        }
        sum += w * it->second.evaluate(target.year_fraction);
        weight_sum += w;
    }
    if (!(weight_sum > 0.0)) throw std::invalid_argument("z1: year weights sum to zero");
    return sum / weight_sum;
}

double z2_weekday_reference(const HourlySeries& history, const TimePoint& target,
                            int window_days) {
    if (history.empty()) throw std::invalid_argument("z2: empty history");
    const int first_year = TimePoint::from_stamp(history.start()).year;
    const int target_doy = day_of_year(target.day());
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = first_year; y < target.year; ++y) {
        const DayStamp anchor =
            days_from_civil(y, 1, 1) + std::min(target_doy, days_in_year(y) - 1);
        for (int off = -window_days; off <= window_days; ++off) {
            const DayStamp d = anchor + off;
            if (day_of_week(d) != target.day_of_week) continue;
            const HourStamp stamp = d * 24 + target.hour;
            if (stamp >= target.instant) continue;
            if (const auto idx = history.index_of(stamp)) {
                sum += history.prices()[*idx];
                ++count;
            }
        }
    }
    if (count == 0) {
        throw std::invalid_argument("z2: no same-weekday reference points in earlier years");
    }
    return sum / static_cast<double>(count);
}

double z3_week_lag(std::span<const double> solution, std::size_t i) {
    if (i < 168 || i - 168 >= solution.size()) {
        throw std::out_of_range("z3: week lag of index " + std::to_string(i) + " unavailable");
    }
    return solution[i - 168];
}

double z4_trend(const HourlySeries& history, int latest_full_year, int reference_offset) {
    auto year_mean = [&](int y) {
        const HourStamp from = hour_stamp(y, 1, 1, 0);
        const HourStamp to = hour_stamp(y + 1, 1, 1, 0);
        if (!history.contains(from) || !history.contains(to - 1)) {
            throw std::invalid_argument("z4: year " + std::to_string(y) + " not fully present");
        }
        const auto first = *history.index_of(from);
        double s = 0.0;
        for (HourStamp k = 0; k < to - from; ++k) {
            s += history.prices()[first + static_cast<std::size_t>(k)];
        }
        return s / static_cast<double>(to - from);
    };
    const double reference = year_mean(latest_full_year - reference_offset);
    return reference - year_mean(latest_full_year);
}

double combine_components(const FourierComponents& z, const FourierForecastConfig& config) {
    const auto& w = config.combination_weights;
    return (w[0] * z.z1 + w[1] * z.z2 + w[2] * z.z3) / config.combination_normalizer() -
           config.trend_halving * z.z4;
}

FourierForecastConfig adapt_to_history(const FourierForecastConfig& config,
                                       const HourlySeries& history) {
    const auto years = full_years(history);
    const int target_year = TimePoint::from_stamp(history.end()).year;
    auto has = [&](int y) { return std::find(years.begin(), years.end(), y) != years.end(); };

    FourierForecastConfig out = config;
    out.year_lag_weights.clear();
    for (const auto& [lag, w] : config.year_lag_weights) {
        if (w > 0.0 && has(target_year - lag)) out.year_lag_weights.emplace(lag, w);
    }
    if (out.year_lag_weights.empty()) {
        for (int y : years) {
            if (y < target_year) out.year_lag_weights.emplace(target_year - y, 1.0);
        }
    }
    if (out.year_lag_weights.empty()) {
        throw std::invalid_argument("fourier: history holds no full year before " +
                                    std::to_string(target_year));
    }
    const int latest = target_year - 1;
    if (!has(latest) || !has(latest - config.trend_reference_offset)) out.use_trend = false;
    return out;
}

ForecastResult fourier_forecast(const HourlySeries& history, const FourierForecastConfig& config,
                                std::size_t horizon_hours) {
    config.validate();
    if (history.size() < 168) throw std::invalid_argument("fourier_forecast: history under one week");
    const int target_year = TimePoint::from_stamp(history.end()).year;

    std::vector<int> years;
    if (config.combination_weights[0] > 0.0) {
        for (const auto& [lag, w] : config.year_lag_weights) {
            if (w > 0.0) years.push_back(target_year - lag);
        }
    }
    const auto fits = fit_yearly_harmonics(history, years, config.harmonic_order);
    const double z4 = config.use_trend
                          ? z4_trend(history, target_year - 1, config.trend_reference_offset)
                          : 0.0;

    std::vector<double> solution(history.prices().begin(), history.prices().end());
    solution.reserve(solution.size() + horizon_hours);
    ForecastResult fc;
    fc.model_id = "fourier";
    for (std::size_t k = 0; k < horizon_hours; ++k) {
        const HourStamp stamp = history.end() + static_cast<HourStamp>(k);
        const TimePoint tp = TimePoint::from_stamp(stamp);
        FourierComponents z;
        if (config.combination_weights[0] > 0.0) {
            TimePoint anchored = tp;
            anchored.year = target_year;
            z.z1 = z1_yearly_component(fits, config, anchored);
        }
        if (config.combination_weights[1] > 0.0) {
            z.z2 = z2_weekday_reference(history, tp, config.weekday_window_days);
        }
        z.z3 = z3_week_lag(solution, solution.size());
        z.z4 = z4;
        const double v = combine_components(z, config);
        solution.push_back(v);
        fc.horizon.push_back(stamp);
        fc.values.push_back(v);
    }
    fc.metadata["trend_included"] = config.use_trend ? "true" : "false";
    return fc;
}

}  // namespace spotcast::baseline
