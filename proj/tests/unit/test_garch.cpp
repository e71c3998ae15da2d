#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spotcast/linear_models.hpp"

using namespace spotcast;
using namespace spotcast::linear;

namespace {

// Direct Gaussian GARCH(1,1) likelihood with sigma_0^2 = sample variance.
double reference_loglik(const GarchParams& p, const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size());
    double s2 = var, ll = 0.0, prev_eps = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        if (t > 0) s2 = p.omega + p.alpha * prev_eps * prev_eps + p.beta * s2;
        const double eps = x[t] - p.mean;
        ll += oracle::normal_logpdf(eps, 0.0, s2);
        prev_eps = eps;
    }
    return ll;
}

}  // namespace

TEST_CASE("variance forecast arithmetic") {
    const GarchParams p{0.1, 0.1, 0.8, 0.0};
    const auto f = garch_forecast(p, 1.0, 1.0, 5);
    CHECK(f.variance[0] == doctest::Approx(1.0));
    for (double m : f.mean) CHECK(m == 0.0);
    const auto far = garch_forecast(p, 25.0, 9.0, 500);
    CHECK(std::abs(far.variance.back() - 1.0) <= 1e-9);

    const GarchParams flat{0.3, 0.0, 0.0, 2.0};
    for (double v : garch_forecast(flat, 4.0, 7.0, 10).variance) CHECK(v == 0.3);
    for (double m : garch_forecast(flat, 4.0, 7.0, 10).mean) CHECK(m == 2.0);

    // Later steps follow omega + (alpha + beta) * previous.
    const auto g = garch_forecast(p, 3.0, 2.0, 4);
    CHECK(g.variance[0] == doctest::Approx(0.1 + 0.1 * 3.0 + 0.8 * 2.0));
    for (std::size_t k = 1; k < g.variance.size(); ++k) {
        CHECK(g.variance[k] == doctest::Approx(0.1 + 0.9 * g.variance[k - 1]));
    }
    CHECK_THROWS_AS((void)garch_forecast(GarchParams{0.1, 0.5, 0.5, 0.0}, 1.0, 1.0, 3), std::invalid_argument);
}

TEST_CASE("likelihood matches a direct implementation") {
    const auto x = oracle::garch11(2000, 0.2, 0.15, 0.7, 5);
    for (const GarchParams& p : {GarchParams{0.2, 0.15, 0.7, 0.0}, GarchParams{1.0, 0.0, 0.0, 0.3},
                                 GarchParams{0.05, 0.3, 0.6, -0.1}}) {
        CHECK(garch_log_likelihood(p, x) == doctest::Approx(reference_loglik(p, x)).epsilon(1e-12));
    }
}

TEST_CASE("i.i.d. input has little persistence") {
    oracle::Gen g(6);
    std::vector<double> x(5000);
    for (auto& v : x) v = 2.0 * g.normal();
    const auto fit = fit_garch(x);
    CHECK(fit.params.valid());
    CHECK(fit.params.alpha + fit.params.beta < 0.2);
    double mean = 0.0, var = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size());
    CHECK(std::abs(fit.params.long_run_variance() / var - 1.0) <= 0.10);
}

TEST_CASE("fit beats random feasible points") {
    const auto x = oracle::garch11(3000, 0.1, 0.1, 0.8, 8);
    const auto fit = fit_garch(x);
    CHECK(fit.params.valid());
    CHECK(fit.start_log_likelihoods.size() == 5);
    oracle::Gen g(9);
    for (int k = 0; k < 20; ++k) {
        GarchParams p;
        p.omega = 0.01 + g.uniform();
        p.alpha = 0.5 * g.uniform();
        p.beta = (0.99 - p.alpha) * g.uniform();
        p.mean = 0.2 * g.normal();
        CHECK(fit.log_likelihood >= garch_log_likelihood(p, x));
    }
}

TEST_CASE("scale equivariance") {
    const auto x = oracle::garch11(4000, 0.1, 0.1, 0.8, 12);
    auto y = x;
    for (auto& v : y) v *= 3.0;
    const auto fx = fit_garch(x).params;
    const auto fy = fit_garch(y).params;
    CHECK(fy.omega == doctest::Approx(9.0 * fx.omega).epsilon(1e-6));
    CHECK(std::abs(fy.alpha - fx.alpha) <= 1e-6);
    CHECK(std::abs(fy.beta - fx.beta) <= 1e-6);
}

TEST_CASE("input guards") {
    CHECK_THROWS_AS((void)fit_garch(std::vector<double>(499, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS((void)fit_garch(std::vector<double>(600, 1.0)), std::domain_error);
    // Extreme but finite inputs still yield valid parameters.
    std::vector<double> spiky(800, 0.0);
    for (std::size_t i = 0; i < spiky.size(); i += 97) spiky[i] = 1e3;
    CHECK(fit_garch(spiky).params.valid());
}
