#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "spotcast/lstsq.hpp"
#include "spotcast/optim.hpp"

using namespace spotcast;

TEST_CASE("least squares recovers an exact line") {
    // y = 3 + 2x at x = 0..9
    std::vector<double> design, y;
    for (int i = 0; i < 10; ++i) {
        design.push_back(1.0);
        design.push_back(i);
        y.push_back(3.0 + 2.0 * i);
    }
    const auto fit = linalg::least_squares(design, 2, y);
    CHECK(fit.coefficients[0] == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(fit.residual_sum_of_squares == doctest::Approx(0.0).epsilon(1e-20));
}

TEST_CASE("least squares matches the normal equations") {
    oracle::Gen g(8);
    const std::size_t n = 60, k = 4;
    std::vector<double> design(n * k), y(n);
    for (auto& v : design) v = g.normal();
    for (auto& v : y) v = g.normal();
    const auto fit = linalg::least_squares(design, k, y);
    // X^T (y - X b) = 0 at the minimizer.
    for (std::size_t c = 0; c < k; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            double pred = 0.0;
            for (std::size_t j = 0; j < k; ++j) pred += design[r * k + j] * fit.coefficients[j];
            s += design[r * k + c] * (y[r] - pred);
        }
        CHECK(std::abs(s) < 1e-10);
    }
}

TEST_CASE("rank deficiency is reported") {
    const std::vector<double> design{1, 2, 2, 4, 3, 6};  // second column = 2 x first
    CHECK_THROWS_AS((void)linalg::least_squares(design, 2, std::vector<double>{1, 2, 3}),
                    linalg::RankDeficientError);
    CHECK_THROWS_AS((void)linalg::least_squares(design, 4, std::vector<double>{1, 2, 3}),
                    std::invalid_argument);
}

TEST_CASE("spd solve") {
    const std::vector<double> a{4, 1, 1, 3};
    const auto x = linalg::solve_spd(a, std::vector<double>{1, 2});
    CHECK(4 * x[0] + x[1] == doctest::Approx(1.0));
    CHECK(x[0] + 3 * x[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)linalg::solve_spd(std::vector<double>{1, 2, 2, 1}, std::vector<double>{1, 1}),
                    linalg::RankDeficientError);
}

TEST_CASE("nelder-mead on Rosenbrock") {
    const optim::Objective rosen = [](std::span<const double> x) {
        return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
    };
    const std::vector<double> steps{0.5, 0.5};
    const auto r = optim::nelder_mead(rosen, {-1.2, 1.0}, steps);
    CHECK(r.converged);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.value < 1e-10);
}

TEST_CASE("nelder-mead treats NaN as infeasible") {
    // Minimum of (x-2)^2 restricted to x <= 1 lies at the boundary.
    const optim::Objective f = [](std::span<const double> x) {
        return x[0] > 1.0 ? std::numeric_limits<double>::quiet_NaN() : (x[0] - 2.0) * (x[0] - 2.0);
    };
    const std::vector<double> steps{0.3};
    const auto r = optim::nelder_mead(f, {0.0}, steps);
    CHECK(r.x[0] <= 1.0);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("nelder-mead respects its evaluation budget") {
    std::size_t calls = 0;
    const optim::Objective f = [&](std::span<const double> x) {
        ++calls;
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    };
    optim::NelderMeadOptions opt;
    opt.max_evaluations = 50;
    opt.restarts = 0;
    const std::vector<double> steps{1, 1, 1};
    const auto r = optim::nelder_mead(f, {5, 5, 5}, steps, opt);
    CHECK(r.evaluations == calls);
    CHECK(calls <= 50 + 4);
    CHECK_FALSE(r.converged);
}
