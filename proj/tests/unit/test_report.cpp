#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <limits>

#include "oracles.hpp"
#include "spotcast/report_io.hpp"
#include "spotcast/svg.hpp"

using namespace spotcast;
using spotcast::io::Json;

TEST_CASE("error report json") {
    const std::vector<double> actual{10.0, 0.0, 5.0};
    const std::vector<double> predicted{8.0, 1.0, 5.0};
    const HourStamp s0 = hour_stamp(2016, 3, 1, 0);
    const auto rep = compute_metrics(actual, predicted, std::vector<HourStamp>{s0, s0 + 1, s0 + 2});
    const auto j = io::to_json(rep, 60);
    CHECK(j["mape"].is_null());
    CHECK(j["mae"].get<double>() == doctest::Approx(1.0));
    CHECK(j["rmse"].get<double>() == doctest::Approx(std::sqrt(5.0 / 3.0)));
    REQUIRE(j["per_point"].size() == 3);
    CHECK(j["per_point"][0]["error"].get<double>() == 2.0);
    CHECK(j["per_point"][1]["timestamp"] == format_timestamp(s0 + 1, 60));
}

TEST_CASE("mrjd params json") {
    mrjd::MrjdModel m;
    m.seasonal.s = {1.0, 0.1, -0.2, 0.05, 0.3};
    m.calibration.params = {0.01, 0.8, 0.05, 0.1, 0.2, 0.03, 1.0 / 365.0};
    m.calibration.log_likelihood = -123.5;
    m.shift = 2.0;
    m.last_x = -0.04;
    m.last_day = 16800;
    const auto j = io::mrjd_params_json(m);
    for (const char* k : {"s1", "s2", "s3", "s4", "s5", "alpha", "phi", "sigma", "mu_j", "sigma_j",
                          "lambda_dt", "dt", "shift", "loglik"}) {
        CHECK_MESSAGE(j.contains(k), k);
    }
    const auto back = io::mrjd_model_from_json(j);
    CHECK(back.seasonal.s == m.seasonal.s);
    CHECK(back.calibration.params.phi == m.calibration.params.phi);
    CHECK(back.calibration.params.lambda_dt == m.calibration.params.lambda_dt);
    CHECK(back.calibration.log_likelihood == m.calibration.log_likelihood);
    CHECK(back.shift == m.shift);
    CHECK(back.last_x == m.last_x);
    CHECK(back.last_day == m.last_day);

    auto broken = j;
    broken["phi"] = 1.5;
    CHECK_THROWS_AS((void)io::mrjd_model_from_json(broken), std::invalid_argument);
}

TEST_CASE("ann model json round trip") {
    oracle::Gen g(2);
    std::vector<double> v(30 * 24);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 40.0 + 5.0 * std::cos(static_cast<double>(i % 24)) + g.normal();
    const HourlySeries h(hour_stamp(2014, 1, 6, 0), v);
    ann::AnnForecasterConfig cfg;
    cfg.hidden = {4};
    cfg.train.max_epochs = 20;
    const auto model = ann::fit_ann(h, nullptr, cfg);
    const auto j = io::to_json(model);
    const auto back = io::ann_model_from_json(Json::parse(j.dump()));
    CHECK(back.network == model.network);
    CHECK(back.inputs.mean == model.inputs.mean);
    CHECK(back.inputs.scale == model.inputs.scale);
    CHECK(back.target_mean == model.target_mean);
    CHECK(ann::ann_forecast(back, h, nullptr, 2).values == ann::ann_forecast(model, h, nullptr, 2).values);

    auto broken = j;
    broken["layers"][0]["bias"].push_back(1.0);
    CHECK_THROWS_AS((void)io::ann_model_from_json(broken), std::invalid_argument);
}

TEST_CASE("json files") {
    const auto dir = std::filesystem::temp_directory_path() / "spotcast_report_test";
    std::filesystem::create_directories(dir);
    const Json j{{"a", 1}, {"b", {1.5, 2.5}}};
    io::write_json(dir / "x.json", j);
    CHECK(io::read_json(dir / "x.json") == j);
    try {
        (void)io::read_json(dir / "missing.json");
        FAIL("expected a throw");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("svg output") {
    const std::vector<svg::Line> lines{{"actual", {1, 2, 3, 2}}, {"model <a&b>", {1, 2.5, NAN, 2}}};
    const auto a = svg::line_chart("t", lines, "day", "EUR/MWh");
    CHECK(a == svg::line_chart("t", lines, "day", "EUR/MWh"));
    CHECK(a.rfind("<svg", 0) == 0);
    CHECK(a.find("model &lt;a&amp;b&gt;") != std::string::npos);
    CHECK(a.find("<a&b>") == std::string::npos);

    const auto b = svg::bar_chart("rmse", {{"x", 3.0}, {"y", std::numeric_limits<double>::quiet_NaN()}});
    CHECK(b.find("n/a") != std::string::npos);
    CHECK(b == svg::bar_chart("rmse", {{"x", 3.0}, {"y", std::numeric_limits<double>::quiet_NaN()}}));
    CHECK(svg::escape("\"it's\"") == "&quot;it&apos;s&quot;");
}
