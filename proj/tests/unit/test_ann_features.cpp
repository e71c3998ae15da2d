#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "oracles.hpp"
#include "spotcast/ann_features.hpp"

using namespace spotcast;
using namespace spotcast::ann;

namespace {

const HourStamp kStart = hour_stamp(2013, 4, 1, 0);  // Monday

HourlySeries noisy_prices(std::size_t days, std::uint64_t seed) {
    oracle::Gen g(seed);
    std::vector<double> v(days * 24);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double hour = static_cast<double>(i % 24);
        const double dow = static_cast<double>((i / 24) % 7);
        v[i] = 40.0 + 8.0 * std::sin(hour / 24.0 * 6.283) - (dow >= 5 ? 6.0 : 0.0) + g.normal();
    }
    return HourlySeries(kStart, v);
}

AnnForecasterConfig small_config() {
    AnnForecasterConfig cfg;
    cfg.hidden = {6};
    cfg.train.max_epochs = 60;
    cfg.train.seed = 3;
    return cfg;
}

}  // namespace

TEST_CASE("feature layout") {
    FeatureConfig cfg;
    CHECK(feature_dim(cfg) == 3 * 24 + 8);
    cfg.use_load = true;
    CHECK(feature_dim(cfg) == 3 * 24 + 10);
    cfg.profile_hours = 7;
    CHECK(feature_dim(cfg) == 3 * 7 + 10);
    cfg.profile_hours = 25;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("rows need two weeks of lags") {
    const auto h = noisy_prices(20, 1);
    const DayStamp first = day_of(kStart);
    CHECK_THROWS_AS((void)build_features(h, nullptr, FeatureConfig{}, first, first + 14), std::invalid_argument);
    const auto fs = build_features(h, nullptr, FeatureConfig{});
    CHECK(fs.data.rows() == 6 * 24);
    CHECK(fs.dropped_rows == 14 * 24);
    CHECK(fs.stamps.front() == kStart + 14 * 24);

    // Row contents: lags, weekday one-hot and the hour position.
    const auto row = fs.data.input(5);
    const HourStamp target = fs.stamps[5];
    CHECK(row[0] == h.price(static_cast<std::size_t>(target - 5 - 24 - kStart)));
    CHECK(row[24 + 5] == h.price(static_cast<std::size_t>(target - 7 * 24 - kStart)));
    CHECK(row[48 + 5] == h.price(static_cast<std::size_t>(target - 14 * 24 - kStart)));
    CHECK(row[72] == 1.0);  // target day is a Monday
    CHECK(row[73] == 0.0);
    CHECK(row[79] == doctest::Approx(5.0 / 23.0));
    CHECK(fs.data.target(5)[0] == h.price(static_cast<std::size_t>(target - kStart)));
}

TEST_CASE("load columns") {
    const auto h = noisy_prices(20, 2);
    FeatureConfig cfg;
    cfg.use_load = true;
    CHECK_THROWS_AS((void)build_features(h, nullptr, cfg), std::invalid_argument);
    const auto load = synthetic_load(kStart, 20 * 24, 7);
    const auto with = build_features(h, &load, cfg);
    const auto without = build_features(h, nullptr, FeatureConfig{});
    CHECK(with.data.input_dim == without.data.input_dim + 2);
    const auto r = with.data.input(3);
    const auto idx = static_cast<std::size_t>(with.stamps[3] - kStart);
    CHECK(r[80] == load.price(idx));
    CHECK(r[81] == load.price(idx) - load.price(idx - 1));
    CHECK(synthetic_load(kStart, 48, 7) == synthetic_load(kStart, 48, 7));
}

TEST_CASE("standardizer") {
    const std::vector<double> rows{1, 5, 3, 5, 5, 5};  // three rows, two columns; column 1 constant
    const auto s = Standardizer::fit(rows, 2);
    CHECK(s.mean[0] == 3.0);
    CHECK(s.scale[0] == doctest::Approx(std::sqrt(8.0 / 3.0)));
    CHECK(s.scale[1] == 0.0);
    std::vector<double> r{5.0, 5.0};
    s.apply(r);
    CHECK(r[1] == 0.0);
    CHECK(r[0] == doctest::Approx(2.0 / std::sqrt(8.0 / 3.0)));

    oracle::Gen g(3);
    std::vector<double> many(300);
    for (auto& v : many) v = 100.0 * g.normal() + 7.0;
    const auto t = Standardizer::fit(many, 3);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> x{g.normal() * 50, g.normal() * 50, g.normal() * 50};
        auto y = x;
        t.apply(y);
        t.invert(y);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-12 * std::max(1.0, std::abs(x[i])));
    }
    CHECK_THROWS_AS(t.apply(r), std::invalid_argument);
}

TEST_CASE("constant history standardizes to zero and forecasts the constant") {
    const HourlySeries flat(kStart, std::vector<double>(40 * 24, 37.0));
    const auto fs = build_features(flat, nullptr, FeatureConfig{});
    const auto st = Standardizer::fit(fs.data.x, fs.data.input_dim);
    auto row = std::vector<double>(fs.data.input(0).begin(), fs.data.input(0).end());
    st.apply(row);
    for (std::size_t i = 0; i < 72; ++i) CHECK(row[i] == 0.0);

    auto cfg = small_config();
    cfg.train.max_epochs = 300;
    const auto model = fit_ann(flat, nullptr, cfg);
    const auto fc = ann_forecast(model, flat, nullptr, 3);
    for (double v : fc.values) CHECK(std::abs(v - 37.0) <= 0.01 * 37.0);
}

TEST_CASE("forecast horizon and recursion") {
    const auto h = noisy_prices(60, 4);
    const auto model = fit_ann(h, nullptr, small_config());
    CHECK(model.network.input_dim() == 80);
    CHECK(model.dropped_rows == 14 * 24);

    const auto one = ann_forecast(model, h, nullptr, 1);
    CHECK(one.values.size() == 24);
    CHECK(one.horizon.front() == h.end());
    CHECK(one.metadata.at("recursive") == "false");

    const auto eight = ann_forecast(model, h, nullptr, 8);
    REQUIRE(eight.values.size() == 8 * 24);
    for (std::size_t i = 0; i < 24; ++i) CHECK(eight.values[i] == one.values[i]);

    // Day 8 must equal a one-day forecast from history extended by days 1..7.
    std::vector<double> ext(h.prices().begin(), h.prices().end());
    ext.insert(ext.end(), eight.values.begin(), eight.values.begin() + 7 * 24);
    const auto day8 = ann_forecast(model, HourlySeries(h.start(), ext), nullptr, 1);
    for (std::size_t i = 0; i < 24; ++i) CHECK(eight.values[7 * 24 + i] == day8.values[i]);

    CHECK_THROWS_AS((void)ann_forecast(model, h.window(h.start(), h.end() - 3), nullptr, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)ann_forecast(model, h.window(h.end() - 10 * 24, h.end()), nullptr, 1), std::invalid_argument);
}

TEST_CASE("fit is deterministic and honours the training window") {
    const auto h = noisy_prices(60, 5);
    auto cfg = small_config();
    cfg.train_days = 20;
    const auto a = fit_ann(h, nullptr, cfg);
    const auto b = fit_ann(h, nullptr, cfg);
    CHECK(a.network == b.network);
    CHECK(a.target_mean == b.target_mean);
    cfg.hidden.clear();
    CHECK_THROWS_AS((void)fit_ann(h, nullptr, cfg), std::invalid_argument);
}
