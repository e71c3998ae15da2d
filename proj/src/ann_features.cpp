#include "spotcast/ann_features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spotcast/random.hpp"

namespace spotcast::ann {

namespace {

std::size_t profile_hour(const FeatureConfig& config, std::size_t j) {
    return j * 24 / config.profile_hours;
}

// Fills one raw feature row; price_at(stamp) and load_at(stamp) return false when absent.
template <typename PriceAt, typename LoadAt>
bool assemble(const FeatureConfig& config, DayStamp day, int hour, PriceAt&& price_at,
              LoadAt&& load_at, double* out) {
    std::size_t k = 0;
    for (const DayStamp lag : {DayStamp{1}, DayStamp{7}, DayStamp{14}}) {
        for (std::size_t j = 0; j < config.profile_hours; ++j) {
            const HourStamp s = (day - lag) * 24 + static_cast<HourStamp>(profile_hour(config, j));
            if (!price_at(s, out[k++])) return false;
        }
    }
    const int dow = day_of_week(day);
    for (int d = 1; d <= 7; ++d) out[k++] = d == dow ? 1.0 : 0.0;
    out[k++] = static_cast<double>(hour) / 23.0;
    if (config.use_load) {
        const HourStamp s = day * 24 + hour;
        double now = 0.0, before = 0.0;
        if (!load_at(s, now) || !load_at(s - 1, before)) return false;
        out[k++] = now;
        out[k++] = now - before;
    }
    return true;
}

auto series_lookup(const HourlySeries* series) {
    return [series](HourStamp s, double& v) {
        if (series == nullptr || !series->contains(s)) return false;
        v = series->price(static_cast<std::size_t>(s - series->start()));
        return true;
    };
}

}  // namespace

void FeatureConfig::validate() const {
    if (profile_hours < 1 || profile_hours > 24) {
        throw std::invalid_argument("features: profile_hours must lie in [1, 24]");
    }
}

std::size_t feature_dim(const FeatureConfig& config) {
    return 3 * config.profile_hours + 7 + 1 + (config.use_load ? 2 : 0);
}

FeatureSet build_features(const HourlySeries& history, const HourlySeries* load,
                          const FeatureConfig& config, DayStamp first_day, DayStamp last_day) {
    config.validate();
    if (config.use_load && load == nullptr) {
        throw std::invalid_argument("build_features: load inputs enabled but no load series given");
    }
    FeatureSet fs;
    fs.data.input_dim = feature_dim(config);
    fs.data.output_dim = 1;
    std::vector<double> row(fs.data.input_dim);
    const auto price_at = series_lookup(&history);
    const auto load_at = series_lookup(load);
    for (DayStamp d = first_day; d < last_day; ++d) {
        for (int h = 0; h < 24; ++h) {
            const HourStamp s = d * 24 + h;
            double target = 0.0;
            if (!price_at(s, target) || !assemble(config, d, h, price_at, load_at, row.data())) {
                ++fs.dropped_rows;
                continue;
            }
            fs.data.push_back(row, std::span<const double>(&target, 1));
            fs.stamps.push_back(s);
        }
    }
    if (fs.data.rows() == 0) {
        throw std::invalid_argument("build_features: no rows left after dropping " +
                                    std::to_string(fs.dropped_rows) +
                                    " with missing lags; need 15 days of history before a target");
    }
    return fs;
}

FeatureSet build_features(const HourlySeries& history, const HourlySeries* load,
                          const FeatureConfig& config) {
    if (history.empty()) throw std::invalid_argument("build_features: empty history");
    return build_features(history, load, config, day_of(history.start()),
                          day_of(history.end() - 1) + 1);
}

Standardizer Standardizer::fit(std::span<const double> rows, std::size_t dim) {
    if (dim == 0 || rows.empty() || rows.size() % dim != 0) {
        throw std::invalid_argument("Standardizer::fit: bad shape");
    }
    const std::size_t n = rows.size() / dim;
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.scale.assign(dim, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < dim; ++j) s.mean[j] += rows[r * dim + j];
    }
    for (double& m : s.mean) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = rows[r * dim + j] - s.mean[j];
            s.scale[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < dim; ++j) {
        const double sd = std::sqrt(s.scale[j] / static_cast<double>(n));
        // Spread below rounding noise of the mean counts as constant.
        s.scale[j] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[j])) ? sd : 0.0;
    }
    return s;
}

void Standardizer::apply(std::span<double> row) const {
    if (row.size() != dim()) throw std::invalid_argument("Standardizer::apply: dimension mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] = scale[j] > 0.0 ? (row[j] - mean[j]) / scale[j] : 0.0;
    }
}

void Standardizer::invert(std::span<double> row) const {
    if (row.size() != dim()) throw std::invalid_argument("Standardizer::invert: dimension mismatch");
    for (std::size_t j = 0; j < row.size(); ++j) {
        row[j] = scale[j] > 0.0 ? row[j] * scale[j] + mean[j] : mean[j];
    }
}

HourlySeries synthetic_load(HourStamp start, std::size_t hours, std::uint64_t seed) {
    rng::Stream stream(seed);
    std::vector<double> values(hours);
    for (std::size_t i = 0; i < hours; ++i) {
        const HourStamp s = start + static_cast<HourStamp>(i);
        const int dow = day_of_week(day_of(s));
        const double weekday = dow <= 5 ? 1.0 : 0.75;
        const double daily = std::sin(2.0 * std::numbers::pi * (hour_of(s) - 6) / 24.0);
        values[i] = weekday * (55.0 + 12.0 * daily) + stream.normal();
    }
    return HourlySeries(start, std::move(values));
}

AnnModel fit_ann(const HourlySeries& history, const HourlySeries* load,
                 const AnnForecasterConfig& config) {
    if (history.empty()) throw std::invalid_argument("fit_ann: empty history");
    const DayStamp last = day_of(history.end() - 1) + 1;
    DayStamp first = day_of(history.start());
    if (config.train_days > 0) {
        first = std::max(first, last - static_cast<DayStamp>(config.train_days));
    }
    FeatureSet fs = build_features(history, load, config.features, first, last);

    AnnModel model;
    model.features = config.features;
    model.train_config = config.train;
    model.dropped_rows = fs.dropped_rows;

    // Standardization statistics come from the rows the optimizer fits, not the held-out tail.
    const std::size_t rows = fs.data.rows();
    const auto held_out = static_cast<std::size_t>(
        std::floor(config.train.validation_fraction * static_cast<double>(rows)));
    const std::size_t fit_rows = rows - held_out >= 10 ? rows - held_out : rows;
    const std::size_t dim = fs.data.input_dim;
    model.inputs = Standardizer::fit(std::span(fs.data.x).first(fit_rows * dim), dim);
    const Standardizer ys = Standardizer::fit(std::span(fs.data.y).first(fit_rows), 1);
    model.target_mean = ys.mean[0];
    model.target_scale = ys.scale[0] > 0.0 ? ys.scale[0] : 1.0;

    for (std::size_t r = 0; r < rows; ++r) {
        model.inputs.apply(std::span(fs.data.x).subspan(r * dim, dim));
        fs.data.y[r] = (fs.data.y[r] - model.target_mean) / model.target_scale;
    }
    const Topology topology = Topology::feed_forward(dim, config.hidden);
    if (topology.hidden_count() < 1) {
        throw std::invalid_argument("fit_ann: the forecaster needs at least one hidden layer");
    }
    TrainResult tr = train(fs.data, topology, config.train);
    model.network = std::move(tr.network);
    model.trace = std::move(tr.trace);
    return model;
}

double predict_row(const AnnModel& model, std::span<const double> raw_features) {
    std::vector<double> x(raw_features.begin(), raw_features.end());
    model.inputs.apply(x);
    return forward(model.network, x)[0] * model.target_scale + model.target_mean;
}

ForecastResult ann_forecast(const AnnModel& model, const HourlySeries& history,
                            const HourlySeries* load, int horizon_days) {
    if (horizon_days < 1) throw std::invalid_argument("ann_forecast: horizon_days must be >= 1");
    if (history.empty() || history.end() % 24 != 0) {
        throw std::invalid_argument("ann_forecast: history must end at a day boundary");
    }
    if (model.features.use_load && load == nullptr) {
        throw std::invalid_argument("ann_forecast: model uses load but no load series given");
    }
    // Actual history followed by forecasts as they are produced.
    std::vector<double> extended(history.prices().begin(), history.prices().end());
    const HourStamp origin = history.start();
    const auto price_at = [&](HourStamp s, double& v) {
        if (s < origin || s >= origin + static_cast<HourStamp>(extended.size())) return false;
        v = extended[static_cast<std::size_t>(s - origin)];
        return true;
    };
    const auto load_at = series_lookup(load);

    ForecastResult fc;
    fc.model_id = "ann";
    std::vector<double> row(feature_dim(model.features));
    const DayStamp first = day_of(history.end());
    for (int k = 0; k < horizon_days; ++k) {
        const DayStamp d = first + k;
        std::array<double, 24> day_values{};
        for (int h = 0; h < 24; ++h) {
            if (!assemble(model.features, d, h, price_at, load_at, row.data())) {
                throw std::invalid_argument("ann_forecast: history too short for lag features on day " +
                                            std::to_string(k + 1));
            }
            day_values[static_cast<std::size_t>(h)] = predict_row(model, row);
        }
        for (int h = 0; h < 24; ++h) {
            extended.push_back(day_values[static_cast<std::size_t>(h)]);
            fc.horizon.push_back(d * 24 + h);
            fc.values.push_back(day_values[static_cast<std::size_t>(h)]);
        }
    }
    fc.metadata["recursive"] = horizon_days > 1 ? "true" : "false";
    return fc;
}

}  // namespace spotcast::ann
