#include "spotcast/models.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spotcast/ann_features.hpp"
#include "spotcast/baseline.hpp"
#include "spotcast/linear_models.hpp"
#include "spotcast/mrjd.hpp"
#include "spotcast/random.hpp"
#include "spotcast/report_io.hpp"
#include "spotcast/seasonal.hpp"

namespace spotcast::models {

namespace {

void check_keys(const Json& config, const std::string& model, std::set<std::string> allowed) {
    if (config.is_null()) return;
    if (!config.is_object()) throw std::invalid_argument(model + " config must be a JSON object");
    for (const auto& [key, _] : config.items()) {
        if (!allowed.contains(key)) {
            throw std::invalid_argument(model + " config: unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_or(const Json& config, const char* key, T fallback) {
    if (config.is_object() && config.contains(key)) return config.at(key).get<T>();
    return fallback;
}

void require_day_boundary(const HourlySeries& history, const std::string& model) {
    if (history.empty() || history.end() % 24 != 0) {
        throw std::invalid_argument(model + ": history must end at a day boundary");
    }
}

// ---------------------------------------------------------------------------

class NaiveModel final : public Forecaster {
public:
    explicit NaiveModel(const Json& config) { check_keys(config, "naive", {}); }
    std::string id() const override { return "naive"; }
    Json fit(const HourlySeries& history, std::uint64_t) const override {
        require_day_boundary(history, "naive");
        return {{"model", "naive"},
                {"params", Json::object()},
                {"fit_diagnostics", {{"history_hours", history.size()}}}};
    }
    ForecastResult forecast(const HourlySeries& history, int days, std::uint64_t) const override {
        return baseline::naive_forecast(history, days);
    }
};

class FourierModel final : public Forecaster {
public:
    explicit FourierModel(const Json& config) {
        check_keys(config, "fourier",
                   {"year_lag_weights", "combination_weights", "trend_halving",
                    "weekday_window_days", "harmonic_order", "trend_reference_offset",
                    "use_trend"});
        if (config.contains("year_lag_weights")) {
            config_.year_lag_weights.clear();
            for (const auto& [lag, w] : config.at("year_lag_weights").items()) {
                config_.year_lag_weights[std::stoi(lag)] = w.get<double>();
            }
        }
        if (config.contains("combination_weights")) {
            const auto w = config.at("combination_weights").get<std::vector<double>>();
            if (w.size() != 3) throw std::invalid_argument("fourier: combination_weights needs 3 entries");
            std::copy(w.begin(), w.end(), config_.combination_weights.begin());
        }
        config_.trend_halving = get_or(config, "trend_halving", config_.trend_halving);
        config_.weekday_window_days = get_or(config, "weekday_window_days", config_.weekday_window_days);
        config_.harmonic_order = get_or(config, "harmonic_order", config_.harmonic_order);
        config_.trend_reference_offset =
            get_or(config, "trend_reference_offset", config_.trend_reference_offset);
        config_.use_trend = get_or(config, "use_trend", config_.use_trend);
        config_.validate();
    }
    std::string id() const override { return "fourier"; }
    Json fit(const HourlySeries& history, std::uint64_t) const override {
        const auto cfg = baseline::adapt_to_history(config_, history);
        const auto years = baseline::full_years(history);
        const auto fits = baseline::fit_yearly_harmonics(history, years, cfg.harmonic_order);
        Json yearly = Json::object();
        for (const auto& [year, f] : fits) {
            yearly[std::to_string(year)] = {{"mean_level", f.mean_level},
                                            {"cos", f.cos_coeffs},
                                            {"sin", f.sin_coeffs}};
        }
        Json lags = Json::object();
        for (const auto& [lag, w] : cfg.year_lag_weights) lags[std::to_string(lag)] = w;
        return {{"model", "fourier"},
                {"params",
                 {{"yearly_fits", std::move(yearly)},
                  {"year_lag_weights", std::move(lags)},
                  {"combination_weights", cfg.combination_weights},
                  {"trend_halving", cfg.trend_halving},
                  {"harmonic_order", cfg.harmonic_order}}},
                {"fit_diagnostics", {{"full_years", years}, {"trend_included", cfg.use_trend}}}};
    }
    ForecastResult forecast(const HourlySeries& history, int days, std::uint64_t) const override {
        if (days < 1) throw std::invalid_argument("fourier: horizon must be >= 1 day");
        require_day_boundary(history, "fourier");
        return baseline::fourier_forecast(history, baseline::adapt_to_history(config_, history),
                                          static_cast<std::size_t>(days) * 24);
    }

private:
    baseline::FourierForecastConfig config_;
};

// Daily average -> weekday decomposition -> stationary series the linear models work on.
struct DailyPipeline {
    DailySeries daily;
    seasonal::DecompositionResult decomposition;
    std::array<double, 24> intraday{};
    bool differenced = false;
    std::vector<double> series;
    seasonal::StationarityVerdict verdict;

    DayStamp next_day() const { return daily.start + static_cast<DayStamp>(daily.size()); }

    // Integrates (if needed) and reseasonalizes forecasts of `series`.
    std::vector<double> to_prices(std::span<const double> forecast) const {
        std::vector<double> level(forecast.begin(), forecast.end());
        if (differenced) {
            double last = decomposition.deseasonalized.back();
            for (double& v : level) {
                last += v;
                v = last;
            }
        }
        return seasonal::reseasonalize(level, next_day(), decomposition.seasonal_profile);
    }
};

enum class Differencing { automatic, always, never };

Differencing parse_differencing(const Json& config, const std::string& model) {
    const auto s = get_or<std::string>(config, "difference", "auto");
    if (s == "auto") return Differencing::automatic;
    if (s == "always") return Differencing::always;
    if (s == "never") return Differencing::never;
    throw std::invalid_argument(model + ": difference must be auto, always or never");
}

DailyPipeline prepare(const HourlySeries& history, Differencing mode, const std::string& model) {
    require_day_boundary(history, model);
    DailyPipeline p;
    p.daily = daily_average(history);
    p.decomposition = seasonal::decompose(p.daily);
    p.intraday = intraday_profile(history);
    p.verdict = seasonal::dickey_fuller(p.decomposition.deseasonalized);
    p.differenced = mode == Differencing::always ||
                    (mode == Differencing::automatic && !p.verdict.reject_unit_root);
    p.series = p.differenced ? p.decomposition.residual : p.decomposition.deseasonalized;
    return p;
}

Json pipeline_diagnostics(const DailyPipeline& p) {
    return {{"days", p.daily.size()},
            {"dickey_fuller_statistic", p.verdict.statistic},
            {"dickey_fuller_critical_5pct", p.verdict.critical_value},
            {"differenced", p.differenced},
            {"weekday_profile", p.decomposition.seasonal_profile}};
}

class LinearModel final : public Forecaster {
public:
    explicit LinearModel(const Json& config) {
        check_keys(config, "linear", {"lags", "difference"});
        lags_ = get_or<std::size_t>(config, "lags", 7);
        mode_ = parse_differencing(config, "linear");
    }
    std::string id() const override { return "linear"; }
    Json fit(const HourlySeries& history, std::uint64_t) const override {
        const auto p = prepare(history, mode_, "linear");
        const auto pred = linear::fit_linear_predictor(p.series, lags_, 1);
        return {{"model", "linear"}, {"params", io::to_json(pred)}, {"fit_diagnostics", pipeline_diagnostics(p)}};
    }
    ForecastResult forecast(const HourlySeries& history, int days, std::uint64_t) const override {
        const auto p = prepare(history, mode_, "linear");
        const auto pred = linear::fit_linear_predictor(p.series, lags_, 1);
        const auto fc = linear::linear_forecast(pred, p.series, static_cast<std::size_t>(days));
        auto out = broadcast_daily("linear", p.next_day(), p.to_prices(fc), p.intraday);
        out.metadata["differenced"] = p.differenced ? "true" : "false";
        return out;
    }

private:
    std::size_t lags_ = 7;
    Differencing mode_ = Differencing::automatic;
};

class ArmaModel final : public Forecaster {
public:
    explicit ArmaModel(const Json& config) {
        check_keys(config, "arma", {"p", "q", "p_max", "q_max", "difference"});
        if (config.contains("p") != config.contains("q")) {
            throw std::invalid_argument("arma: give both p and q, or neither");
        }
        if (config.contains("p")) {
            fixed_ = {config.at("p").get<std::size_t>(), config.at("q").get<std::size_t>()};
        }
        p_max_ = get_or<std::size_t>(config, "p_max", 3);
        q_max_ = get_or<std::size_t>(config, "q_max", 3);
        mode_ = parse_differencing(config, "arma");
    }
    std::string id() const override { return "arma"; }
    Json fit(const HourlySeries& history, std::uint64_t) const override {
        const auto p = prepare(history, mode_, "arma");
        const auto [params, aic] = estimate(p.series);
        auto diag = pipeline_diagnostics(p);
        diag["aic"] = aic;
        return {{"model", "arma"}, {"params", io::to_json(params)}, {"fit_diagnostics", diag}};
    }
    ForecastResult forecast(const HourlySeries& history, int days, std::uint64_t) const override {
        const auto p = prepare(history, mode_, "arma");
        const auto params = estimate(p.series).first;
        const auto fc = linear::arma_forecast(params, p.series, static_cast<std::size_t>(days));
        auto out = broadcast_daily("arma", p.next_day(), p.to_prices(fc), p.intraday);
        out.metadata["order"] = std::to_string(params.p()) + "," + std::to_string(params.q());
        out.metadata["differenced"] = p.differenced ? "true" : "false";
        return out;
    }

private:
    std::pair<linear::ArmaParams, Json> estimate(std::span<const double> series) const {
        std::size_t p = 0, q = 0;
        Json aic = nullptr;
        if (fixed_) {
            std::tie(p, q) = *fixed_;
        } else {
            const auto best = linear::order_select_aic(series, p_max_, q_max_);
            p = best.p;
            q = best.q;
            aic = best.aic;
        }
        return {linear::fit_arma(series, p, q), aic};
    }

    std::optional<std::pair<std::size_t, std::size_t>> fixed_;
    std::size_t p_max_ = 3;
    std::size_t q_max_ = 3;
    Differencing mode_ = Differencing::automatic;
};

class GarchModel final : public Forecaster {
public:
    explicit GarchModel(const Json& config) {
        check_keys(config, "garch", {"band_z"});
        band_z_ = get_or(config, "band_z", 1.96);
        if (!(band_z_ >= 0.0)) throw std::invalid_argument("garch: band_z must be >= 0");
    }
    std::string id() const override { return "garch"; }
    Json fit(const HourlySeries& history, std::uint64_t) const override {
        const auto p = prepare(history, Differencing::always, "garch");
        const auto fit = linear::fit_garch(p.series);
        auto diag = pipeline_diagnostics(p);
        diag["log_likelihood"] = fit.log_likelihood;
        diag["converged"] = fit.converged;
        diag["evaluations"] = fit.evaluations;
        diag["start_log_likelihoods"] = fit.start_log_likelihoods;
        diag["constant_variance"] = fit.constant_variance;
        return {{"model", "garch"}, {"params", io::to_json(fit.params)}, {"fit_diagnostics", diag}};
    }
    // GARCH describes the daily shocks of the deseasonalized level; the central forecast
    // accumulates the mean shock and the band accumulates the conditional variances.
    ForecastResult forecast(const HourlySeries& history, int days, std::uint64_t) const override {
        const auto p = prepare(history, Differencing::always, "garch");
        const auto fit = linear::fit_garch(p.series);
        const auto g = linear::garch_forecast(fit.params, p.series, static_cast<std::size_t>(days));
        const auto central = p.to_prices(g.mean);
        auto out = broadcast_daily("garch", p.next_day(), central, p.intraday);
        if (band_z_ > 0.0) {
            out.lower.emplace(out.values.size());
            out.upper.emplace(out.values.size());
            double cumulative = 0.0;
            for (std::size_t k = 0; k < static_cast<std::size_t>(days); ++k) {
                cumulative += g.variance[k];
                const double half = band_z_ * std::sqrt(cumulative);
                for (std::size_t h = 0; h < 24; ++h) {
                    (*out.lower)[k * 24 + h] = out.values[k * 24 + h] - half;
                    (*out.upper)[k * 24 + h] = out.values[k * 24 + h] + half;
                }
            }
        }
        out.metadata["converged"] = fit.converged ? "true" : "false";
        return out;
    }

private:
    double band_z_ = 1.96;
};

class MrjdForecaster final : public Forecaster {
public:
    explicit MrjdForecaster(const Json& config) {
        check_keys(config, "mrjd", {"paths", "dt", "quantiles", "threads"});
        paths_ = get_or<std::size_t>(config, "paths", 1000);
        dt_ = get_or(config, "dt", 1.0 / 365.0);
        threads_ = get_or<unsigned>(config, "threads", 1);
        if (config.contains("quantiles")) {
            if (config.at("quantiles").is_null()) {
                quantiles_.reset();
            } else {
                const auto q = config.at("quantiles").get<std::vector<double>>();
                if (q.size() != 2) throw std::invalid_argument("mrjd: quantiles needs 2 entries");
                quantiles_ = std::pair{q[0], q[1]};
            }
        }
        if (paths_ < 1) throw std::invalid_argument("mrjd: paths must be >= 1");
    }
    std::string id() const override { return "mrjd"; }
    Json fit(const HourlySeries& history, std::uint64_t) const override {
        require_day_boundary(history, "mrjd");
        const auto model = mrjd::fit_mrjd_model(daily_average(history), dt_);
        const auto& c = model.calibration;
        return {{"model", "mrjd"},
                {"params", io::mrjd_params_json(model)},
                {"fit_diagnostics",
                 {{"loglik", c.log_likelihood},
                  {"converged", c.converged},
                  {"degenerate", c.degenerate},
                  {"jumps_rejected", c.jumps_rejected},
                  {"evaluations", c.evaluations},
                  {"kappa", c.params.kappa()},
                  {"start_log_likelihoods", c.start_log_likelihoods}}}};
    }
    ForecastResult forecast(const HourlySeries& history, int days, std::uint64_t seed) const override {
        require_day_boundary(history, "mrjd");
        if (days < 1) throw std::invalid_argument("mrjd: horizon must be >= 1 day");
        const auto model = mrjd::fit_mrjd_model(daily_average(history), dt_);
        const auto paths = mrjd::simulate_days(model, static_cast<std::size_t>(days), paths_,
                                               rng::derive_seed(seed, "mrjd"), threads_);
        const auto daily = mrjd::mrjd_forecast(paths, paths_ >= 100 ? quantiles_ : std::nullopt);
        const auto profile = intraday_profile(history);
        auto out = broadcast_daily("mrjd", model.last_day + 1, daily.values, profile);
        if (daily.lower) {
            out.lower.emplace();
            out.upper.emplace();
            for (std::size_t k = 0; k < daily.values.size(); ++k) {
                for (std::size_t h = 0; h < 24; ++h) {
                    out.lower->push_back((*daily.lower)[k] + profile[h]);
                    out.upper->push_back((*daily.upper)[k] + profile[h]);
                }
            }
        }
        out.metadata = daily.metadata;
        out.metadata["shift"] = std::to_string(model.shift);
        return out;
    }

private:
    std::size_t paths_ = 1000;
    double dt_ = 1.0 / 365.0;
    unsigned threads_ = 1;
    std::optional<std::pair<double, double>> quantiles_ = std::pair{0.05, 0.95};
};

class AnnForecaster final : public Forecaster {
public:
    explicit AnnForecaster(const Json& config) {
        check_keys(config, "ann",
                   {"hidden", "max_epochs", "learning_rate", "momentum", "conjugate_gradient",
                    "validation_fraction", "patience", "train_days", "profile_hours"});
        config_.hidden = get_or(config, "hidden", std::vector<std::size_t>{150, 20});
        config_.train_days = get_or<std::size_t>(config, "train_days", 182);
        config_.features.profile_hours = get_or<std::size_t>(config, "profile_hours", 24);
        auto& t = config_.train;
        t.max_epochs = get_or<std::size_t>(config, "max_epochs", 150);
        t.learning_rate = get_or(config, "learning_rate", 0.05);
        t.momentum = get_or(config, "momentum", 0.9);
        t.conjugate_gradient = get_or(config, "conjugate_gradient", false);
        t.validation_fraction = get_or(config, "validation_fraction", 0.1);
        t.patience = get_or<std::size_t>(config, "patience", 20);
        t.validate();
        config_.features.validate();
        if (config_.hidden.empty()) throw std::invalid_argument("ann: need at least one hidden layer");
    }
    std::string id() const override { return "ann"; }
    Json fit(const HourlySeries& history, std::uint64_t seed) const override {
        return io::to_json(train(history, seed));
    }
    ForecastResult forecast(const HourlySeries& history, int days, std::uint64_t seed) const override {
        const auto model = train(history, seed);
        auto out = ann::ann_forecast(model, history, nullptr, days);
        if (model.trace.diverged) out.metadata["diverged"] = "true";
        return out;
    }

private:
    ann::AnnModel train(const HourlySeries& history, std::uint64_t seed) const {
        auto cfg = config_;
        cfg.train.seed = rng::derive_seed(seed, "ann");
        return ann::fit_ann(history, nullptr, cfg);
    }

    ann::AnnForecasterConfig config_;
};

template <typename T>
Factory factory() {
    return [](const Json& config) -> std::unique_ptr<Forecaster> { return std::make_unique<T>(config); };
}

std::string join(const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
    return s;
}

}  // namespace

UnknownModelError::UnknownModelError(const std::string& name, const std::vector<std::string>& known)
    : std::invalid_argument("unknown model '" + name + "'; registered models: " + join(known)) {}

void Registry::add(const std::string& name, Factory factory) { factories_[name] = std::move(factory); }

bool Registry::contains(const std::string& name) const { return factories_.contains(name); }

std::vector<std::string> Registry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : factories_) out.push_back(name);
    return out;
}

std::unique_ptr<Forecaster> Registry::create(const std::string& name, const Json& config) const {
    const auto it = factories_.find(name);
    if (it == factories_.end()) throw UnknownModelError(name, names());
    return it->second(config.is_null() ? Json::object() : config);
}

Registry Registry::builtin() {
    Registry r;
    r.add("naive", factory<NaiveModel>());
    r.add("fourier", factory<FourierModel>());
    r.add("linear", factory<LinearModel>());
    r.add("arma", factory<ArmaModel>());
    r.add("garch", factory<GarchModel>());
    r.add("mrjd", factory<MrjdForecaster>());
    r.add("ann", factory<AnnForecaster>());
    return r;
}

std::array<double, 24> intraday_profile(const HourlySeries& history, int profile_days) {
    std::array<double, 24> profile{};
    if (history.empty() || profile_days < 1) return profile;
    const DayStamp last_full = day_of(history.end()) - 1;
    const DayStamp first_full = day_of(history.start() + 23);
    if (last_full < first_full) return profile;
    const DayStamp from = std::max(first_full, last_full - profile_days + 1);
    int used = 0;
    for (DayStamp d = from; d <= last_full; ++d) {
        const auto base = static_cast<std::size_t>(d * 24 - history.start());
        double mean = 0.0;
        for (std::size_t h = 0; h < 24; ++h) mean += history.price(base + h);
        mean /= 24.0;
        for (std::size_t h = 0; h < 24; ++h) profile[h] += history.price(base + h) - mean;
        ++used;
    }
    for (double& v : profile) v /= used;
    // Remove the rounding residue so a broadcast day averages back to its level.
    double centre = 0.0;
    for (double v : profile) centre += v;
    centre /= 24.0;
    for (double& v : profile) v -= centre;
    return profile;
}

ForecastResult broadcast_daily(const std::string& model_id, DayStamp first_day,
                               std::span<const double> daily,
                               const std::array<double, 24>& profile) {
    ForecastResult fc;
    fc.model_id = model_id;
    for (std::size_t k = 0; k < daily.size(); ++k) {
        for (std::size_t h = 0; h < 24; ++h) {
            fc.horizon.push_back((first_day + static_cast<DayStamp>(k)) * 24 +
                                 static_cast<HourStamp>(h));
            fc.values.push_back(daily[k] + profile[h]);
        }
    }
    return fc;
}

}  // namespace spotcast::models
