#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "oracles.hpp"
#include "spotcast/linear_models.hpp"
#include "spotcast/lstsq.hpp"

using namespace spotcast;
using namespace spotcast::linear;

namespace {

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    oracle::Gen g(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = g.normal();
    return x;
}

std::vector<double> arma11(std::size_t n, double phi, double theta, std::uint64_t seed) {
    oracle::Gen g(seed);
    std::vector<double> x(n);
    double prev = 0.0, prev_z = 0.0;
    for (std::size_t t = 0; t < n + 200; ++t) {
        const double z = g.normal();
        const double v = phi * prev + z + theta * prev_z;
        prev = v;
        prev_z = z;
        if (t >= 200) x[t - 200] = v;
    }
    return x;
}

double one_step_mse(const LinearPredictor& p, std::span<const double> x) {
    const std::size_t n = p.lag_coeffs.size();
    double s = 0.0;
    for (std::size_t t = n; t < x.size(); ++t) {
        const double e = x[t] - p.predict(x.subspan(t - n, n));
        s += e * e;
    }
    return s / static_cast<double>(x.size() - n);
}

}  // namespace

TEST_CASE("autocovariance") {
    for (double g : autocovariance(std::vector<double>(20, 4.0), 5)) CHECK(g == 0.0);
    std::vector<double> alt(1000);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 == 0 ? 1.0 : -1.0;
    const auto ga = autocovariance(alt, 1);
    CHECK(ga[1] / ga[0] == doctest::Approx(-1.0).epsilon(1e-2));
    const auto ar = oracle::ar1(100000, 0.8, 1.0, 11);
    const auto g = autocovariance(ar, 2);
    CHECK(std::abs(g[1] / g[0] - 0.8) <= 0.02);
    CHECK_THROWS_AS((void)autocovariance(alt, 500), std::invalid_argument);
}

TEST_CASE("levinson-durbin agrees with a direct Toeplitz solve") {
    const auto x = oracle::ar1(5000, 0.6, 1.0, 3);
    const auto g = autocovariance(x, 3);
    const auto ld = levinson_durbin(g, 3);
    std::vector<double> toeplitz(9);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) toeplitz[static_cast<std::size_t>(i * 3 + j)] = g[static_cast<std::size_t>(std::abs(i - j))];
    }
    const auto direct = linalg::solve_spd(toeplitz, std::vector<double>{g[1], g[2], g[3]});
    for (int i = 0; i < 3; ++i) CHECK(ld.coefficients[static_cast<std::size_t>(i)] == doctest::Approx(direct[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("linear predictor") {
    const auto noise = white_noise(5000, 2);
    const auto p0 = fit_linear_predictor(noise, 0);
    double mean = 0.0;
    for (double v : noise) mean += v;
    mean /= static_cast<double>(noise.size());
    CHECK(p0.intercept == doctest::Approx(mean));
    CHECK(p0.predict(std::vector<double>{}) == doctest::Approx(mean));

    const auto ar = oracle::ar1(20000, 0.8, 1.0, 4, 10.0);
    const auto p1 = fit_linear_predictor(ar, 1);
    CHECK(std::abs(p1.lag_coeffs[0] - 0.8) <= 0.05);
    CHECK(p1.intercept == doctest::Approx(p1.mean * (1.0 - p1.lag_coeffs[0])));

    const auto p3 = fit_linear_predictor(noise, 3);
    for (double a : p3.lag_coeffs) CHECK(std::abs(a) <= 0.05);

    CHECK_THROWS_AS((void)fit_linear_predictor(std::vector<double>(100, 1.0), 2), linalg::RankDeficientError);
    CHECK_THROWS_AS((void)fit_linear_predictor(std::vector<double>(15, 0.5), 2),
                    std::invalid_argument);
}

TEST_CASE("linear predictor is locally optimal in-sample") {
    const auto x = oracle::ar1(50000, 0.7, 1.0, 9);
    const auto p = fit_linear_predictor(x, 2);
    const double base = one_step_mse(p, x);
    for (std::size_t k = 0; k < 2; ++k) {
        for (double d : {-1e-3, 1e-3}) {
            auto q = p;
            q.lag_coeffs[k] += d;
            CHECK(one_step_mse(q, x) >= base - 1e-12);
        }
    }
}

TEST_CASE("linear predictor scale equivariance") {
    const auto x = oracle::ar1(5000, 0.5, 1.0, 10, 3.0);
    auto y = x;
    for (auto& v : y) v *= 2.5;
    const auto px = fit_linear_predictor(x, 2);
    const auto py = fit_linear_predictor(y, 2);
    CHECK(py.intercept == doctest::Approx(2.5 * px.intercept).epsilon(1e-6));
    const std::vector<double> recent{3.5, 4.0};
    const std::vector<double> recent_y{8.75, 10.0};
    CHECK(py.predict(recent_y) == doctest::Approx(2.5 * px.predict(recent)).epsilon(1e-6));
}

TEST_CASE("arma estimation") {
    const auto x = arma11(10000, 0.5, 0.3, 21);
    const auto p = fit_arma(x, 1, 1);
    CHECK(p.ar[0] >= 0.4);
    CHECK(p.ar[0] <= 0.6);
    CHECK(p.ma[0] >= 0.2);
    CHECK(p.ma[0] <= 0.4);
    CHECK(is_causal(p.ar));
    CHECK(is_invertible(p.ma));

    const auto ar = oracle::ar1(10000, 0.7, 1.0, 22);
    CHECK(std::abs(fit_arma(ar, 1, 1).ma[0]) <= 0.1);

    const auto p00 = fit_arma(ar, 0, 0);
    CHECK(p00.ar.empty());
    CHECK(p00.ma.empty());
    CHECK(p00.sigma2 > 0.0);
    CHECK_THROWS_AS((void)fit_arma(std::vector<double>(60, 1.0), 1, 1), std::invalid_argument);
}

TEST_CASE("root reflection") {
    CHECK(is_causal(std::vector<double>{0.5}));
    CHECK_FALSE(is_causal(std::vector<double>{1.5}));
    const auto c = make_causal(std::vector<double>{2.0});
    CHECK(c[0] == doctest::Approx(0.5));
    const auto inv = make_invertible(std::vector<double>{-4.0});
    CHECK(inv[0] == doctest::Approx(-0.25));
    CHECK(is_invertible(inv));
    // AR(2) with roots 0.5 and 2 -> reflect the inside root.
    const auto ar2 = make_causal(std::vector<double>{2.5, -1.0});
    CHECK(is_causal(ar2));
}

TEST_CASE("arma forecast recursion") {
    ArmaParams p;
    p.ar = {0.5};
    p.mean = 0.0;
    const auto fc = arma_forecast(p, std::vector<double>{2.0}, 3);
    CHECK(fc == std::vector<double>{1.0, 0.5, 0.25});

    p.mean = 7.0;
    for (double v : arma_forecast(p, std::vector<double>{7.0, 7.0}, 5)) CHECK(v == 7.0);

    p.ar = {0.9};
    p.mean = 1.0;
    const auto far = arma_forecast(p, std::vector<double>{3.0}, 200);
    CHECK(std::abs(far.back() - 1.0) <= std::pow(0.9, 200) * 2.0 * (1.0 + 1e-12));

    ArmaParams q;
    q.ar = {0.4};
    q.ma = {0.5};
    CHECK_THROWS_AS((void)arma_forecast(q, std::vector<double>{}, 2), std::invalid_argument);
}

TEST_CASE("AIC order selection") {
    int white_zero = 0;
    for (int s = 0; s < 5; ++s) {
        const auto c = order_select_aic(white_noise(2000, 40 + s), 2, 2);
        white_zero += (c.p == 0 && c.q == 0) ? 1 : 0;
    }
    CHECK(white_zero >= 3);
    CHECK(order_select_aic(oracle::ar1(3000, 0.9, 1.0, 41), 2, 2).p >= 1);

    const std::vector<AicCandidate> tie{{2, 1, 10.0}, {1, 1, 10.0}, {0, 2, 10.0}, {3, 0, 11.0}};
    const auto best = select_min_aic(tie);
    CHECK(best.p == 0);
    CHECK(best.q == 2);
    CHECK_THROWS_AS((void)order_select_aic(white_noise(500, 1), 4, 0), std::invalid_argument);
}
