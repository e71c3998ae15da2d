#include "spotcast/backtest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "spotcast/ensemble.hpp"
#include "spotcast/report_io.hpp"
#include "spotcast/series_io.hpp"
#include "spotcast/svg.hpp"

namespace spotcast::backtest {

namespace {

ModelOutcome run_one(const ModelSpec& ms, const models::Registry& registry,
                     const HourlySeries& train, int days, std::uint64_t seed) {
    ModelOutcome out;
    out.model_id = ms.id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const auto model = registry.create(ms.id, ms.config);
        ForecastResult fc = model->forecast(train, days, seed);
        fc.validate();
        for (double v : fc.values) {
            if (!std::isfinite(v)) throw std::runtime_error("forecast contains non-finite values");
        }
        out.forecast = std::move(fc);
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

void score(ModelOutcome& m, const BacktestReport& r) {
    if (!m.ok) return;
    if (m.forecast->horizon.size() != r.test.size()) {
        m.ok = false;
        m.error = "forecast covers " + std::to_string(m.forecast->horizon.size()) +
                  " hours, test window has " + std::to_string(r.test.size());
        return;
    }
    for (std::size_t i = 0; i < r.test.size(); ++i) {
        if (m.forecast->horizon[i] != r.test.stamp(i)) {
            m.ok = false;
            m.error = "forecast horizon is not aligned with the test window";
            return;
        }
    }
    const auto predicted = aggregate(m.forecast->values, r.granularity);
    m.report = compute_metrics(r.actual, predicted, r.stamps);
}

}  // namespace

std::string to_string(Granularity g) { return g == Granularity::hourly ? "hourly" : "daily"; }

Granularity granularity_from_string(const std::string& s) {
    if (s == "hourly") return Granularity::hourly;
    if (s == "daily") return Granularity::daily;
    throw std::invalid_argument("granularity must be hourly or daily, got '" + s + "'");
}

BacktestSpec BacktestSpec::default_for(const HourlySeries& data, std::uint64_t seed, int test_days) {
    if (data.empty()) throw std::invalid_argument("backtest: empty data");
    BacktestSpec spec;
    spec.seed = seed;
    spec.train_start = (data.start() % 24 == 0) ? data.start() : (day_of(data.start()) + 1) * 24;
    spec.test_end = day_of(data.end()) * 24;
    spec.test_start = spec.test_end - static_cast<HourStamp>(test_days) * 24;
    for (const char* id : {"naive", "fourier", "linear", "arma", "garch", "mrjd", "ann"}) {
        spec.models.push_back({id, models::Json::object()});
    }
    return spec;
}

void BacktestSpec::validate(const HourlySeries& data) const {
    if (models.empty()) throw std::invalid_argument("backtest: no models listed");
    if (!(train_start < test_start && test_start < test_end)) {
        throw std::invalid_argument("backtest: need train_start < test_start < test_end");
    }
    if (train_start % 24 != 0 || test_start % 24 != 0 || test_end % 24 != 0) {
        throw std::invalid_argument("backtest: windows must start and end at midnight");
    }
    if (!data.contains(train_start) || !data.contains(test_end - 1)) {
        throw std::invalid_argument("backtest: data does not cover both windows");
    }
    std::vector<std::string> ids;
    for (const auto& m : models) ids.push_back(m.id);
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw std::invalid_argument("backtest: model ids must be unique");
    }
    if (std::find(ids.begin(), ids.end(), "hybrid") != ids.end()) {
        throw std::invalid_argument("backtest: 'hybrid' is reserved");
    }
}

std::vector<double> aggregate(std::span<const double> hourly, Granularity g) {
    if (g == Granularity::hourly) return {hourly.begin(), hourly.end()};
    if (hourly.size() % 24 != 0) throw std::invalid_argument("aggregate: partial day");
    std::vector<double> out(hourly.size() / 24);
    for (std::size_t d = 0; d < out.size(); ++d) {
        double s = 0.0;
        for (std::size_t h = 0; h < 24; ++h) s += hourly[d * 24 + h];
        out[d] = s / 24.0;
    }
    return out;
}

BacktestReport run_backtest(const BacktestSpec& spec, const HourlySeries& data,
                            const models::Registry& registry) {
    spec.validate(data);
    for (const auto& m : spec.models) {
        if (!registry.contains(m.id)) throw models::UnknownModelError(m.id, registry.names());
    }
    BacktestReport r;
    r.granularity = spec.granularity;
    const HourlySeries train = data.window(spec.train_start, spec.test_start);
    r.test = data.window(spec.test_start, spec.test_end);
    const int days = static_cast<int>((spec.test_end - spec.test_start) / 24);
    r.actual = aggregate(r.test.prices(), spec.granularity);
    if (spec.granularity == Granularity::hourly) {
        for (std::size_t i = 0; i < r.test.size(); ++i) r.stamps.push_back(r.test.stamp(i));
    } else {
        for (int d = 0; d < days; ++d) r.stamps.push_back(spec.test_start + d * 24);
    }

    // Each slot is written by exactly one worker, so scheduling cannot change the result.
    r.models.resize(spec.models.size());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(spec.models.size())));
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < spec.models.size(); i += workers) {
            r.models[i] = run_one(spec.models[i], registry, train, days, spec.seed);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (auto& m : r.models) score(m, r);

    r.hybrid.model_id = "hybrid";
    std::vector<ForecastResult> members;
    std::vector<std::string> missing;
    for (const auto& id : spec.hybrid_members) {
        const auto it = std::find_if(r.models.begin(), r.models.end(),
                                     [&](const ModelOutcome& m) { return m.model_id == id; });
        if (it != r.models.end() && it->ok) {
            members.push_back(*it->forecast);
        } else {
            missing.push_back(id);
        }
    }
    if (members.empty()) {
        r.hybrid.error = "no hybrid member produced a forecast";
    } else {
        r.hybrid.forecast = ensemble::hybrid_average(members);
        r.hybrid.ok = true;
        score(r.hybrid, r);
        if (!missing.empty()) {
            std::string list;
            for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
            r.hybrid.error = "averaged without: " + list;
        }
    }

    r.partial = !missing.empty() || std::any_of(r.models.begin(), r.models.end(),
                                                [](const ModelOutcome& m) { return !m.ok; });

    std::vector<const ModelOutcome*> order;
    for (const auto& m : r.models) order.push_back(&m);
    order.push_back(&r.hybrid);
    const auto rmse = [](const ModelOutcome* m) {
        return m->ok && m->report ? m->report->rmse : std::numeric_limits<double>::infinity();
    };
    std::stable_sort(order.begin(), order.end(), [&](const ModelOutcome* a, const ModelOutcome* b) {
        const double ra = rmse(a), rb = rmse(b);
        if (ra != rb) return ra < rb;
        return a->model_id < b->model_id;
    });
    for (const auto* m : order) r.ranking.push_back(m->model_id);
    return r;
}

models::Json to_json(const BacktestReport& report, int utc_offset_minutes, bool with_timings) {
    using models::Json;
    auto outcome = [&](const ModelOutcome& m) {
        Json j;
        j["model_id"] = m.model_id;
        j["ok"] = m.ok;
        if (!m.error.empty()) j["error"] = m.error;
        if (m.forecast) j["forecast_id"] = m.forecast->model_id;
        j["report"] = m.report ? io::to_json(*m.report, utc_offset_minutes) : Json(nullptr);
        if (with_timings) j["runtime_seconds"] = m.runtime_seconds;
        return j;
    };
    Json j;
    j["granularity"] = to_string(report.granularity);
    j["test_start"] = format_timestamp(report.test.start(), utc_offset_minutes);
    j["test_end"] = format_timestamp(report.test.end(), utc_offset_minutes);
    j["partial"] = report.partial;
    Json models = Json::array();
    for (const auto& m : report.models) models.push_back(outcome(m));
    j["models"] = std::move(models);
    j["hybrid"] = outcome(report.hybrid);
    j["ranking"] = report.ranking;
    return j;
}

std::string forecast_chart_svg(const BacktestReport& report) {
    std::vector<svg::Line> lines{{"actual", report.actual}};
    auto add = [&](const ModelOutcome& m) {
        if (m.ok && m.forecast) {
            lines.push_back({m.forecast->model_id, aggregate(m.forecast->values, report.granularity)});
        }
    };
    for (const auto& m : report.models) add(m);
    add(report.hybrid);
    const std::string unit = report.granularity == Granularity::daily ? "test day" : "test hour";
    return svg::line_chart("Test window: actual and forecasts", lines, unit, "EUR/MWh");
}

std::string rmse_chart_svg(const BacktestReport& report) {
    std::vector<std::pair<std::string, double>> bars;
    auto add = [&](const ModelOutcome& m) {
        bars.emplace_back(m.model_id, m.ok && m.report ? m.report->rmse
                                                       : std::numeric_limits<double>::quiet_NaN());
    };
    for (const auto& m : report.models) add(m);
    add(report.hybrid);
    return svg::bar_chart("RMSE by model (" + to_string(report.granularity) + ")", bars, "EUR/MWh");
}

}  // namespace spotcast::backtest
