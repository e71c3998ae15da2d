// Each vector kernel is compared against the scalar reference and against a
// plain long-double loop. Run twice by ctest: native dispatch and forced scalar.

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <cstdlib>
#include <string_view>
#include <vector>

#include "oracles.hpp"
#include "spotcast/kernels.hpp"

using namespace spotcast;

namespace {

std::vector<double> random_vec(oracle::Gen& g, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = g.normal();
    return v;
}

// Tolerance for reassociated sums: a few ulps of the absolute-value sum.
double sum_tol(double abs_sum) { return 64.0 * 2.2e-16 * (abs_sum + 1.0); }

void check_table(const kernels::KernelTable& t) {
    oracle::Gen g(99);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 33u, 100u, 1001u}) {
        const auto a = random_vec(g, n);
        const auto b = random_vec(g, n);
        long double ref = 0.0L, abs_sum = 0.0L, ssd = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            ref += static_cast<long double>(a[i]) * b[i];
            abs_sum += std::abs(a[i] * b[i]);
            const long double d = static_cast<long double>(a[i]) - b[i];
            ssd += d * d;
        }
        CHECK(std::abs(t.dot(a.data(), b.data(), n) - static_cast<double>(ref)) <=
              sum_tol(static_cast<double>(abs_sum)));
        CHECK(std::abs(t.sum_sq_diff(a.data(), b.data(), n) - static_cast<double>(ssd)) <=
              sum_tol(static_cast<double>(ssd)));

        auto y = b;
        t.axpy(0.75, a.data(), y.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(b[i] + 0.75 * a[i]).epsilon(1e-15));
    }

    for (std::size_t rows : {1u, 2u, 5u, 20u}) {
        for (std::size_t cols : {1u, 3u, 4u, 9u, 31u, 150u}) {
            const auto w = random_vec(g, rows * cols);
            const auto x = random_vec(g, cols);
            const auto bias = random_vec(g, rows);
            const auto v = random_vec(g, rows);
            std::vector<double> out(rows), out_nb(rows), out_t(cols);
            t.gemv(w.data(), x.data(), bias.data(), out.data(), rows, cols);
            t.gemv(w.data(), x.data(), nullptr, out_nb.data(), rows, cols);
            t.gemv_t(w.data(), v.data(), out_t.data(), rows, cols);
            for (std::size_t r = 0; r < rows; ++r) {
                long double s = 0.0L, abs_s = 0.0L;
                for (std::size_t c = 0; c < cols; ++c) {
                    s += static_cast<long double>(w[r * cols + c]) * x[c];
                    abs_s += std::abs(w[r * cols + c] * x[c]);
                }
                CHECK(std::abs(out_nb[r] - static_cast<double>(s)) <= sum_tol(static_cast<double>(abs_s)));
                CHECK(std::abs(out[r] - static_cast<double>(s + bias[r])) <=
                      sum_tol(static_cast<double>(abs_s) + std::abs(bias[r])));
            }
            for (std::size_t c = 0; c < cols; ++c) {
                long double s = 0.0L, abs_s = 0.0L;
                for (std::size_t r = 0; r < rows; ++r) {
                    s += static_cast<long double>(w[r * cols + c]) * v[r];
                    abs_s += std::abs(w[r * cols + c] * v[r]);
                }
                CHECK(std::abs(out_t[c] - static_cast<double>(s)) <= sum_tol(static_cast<double>(abs_s)));
            }
            auto a = w;
            t.ger(-0.5, v.data(), x.data(), a.data(), rows, cols);
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) {
                    CHECK(a[r * cols + c] ==
                          doctest::Approx(w[r * cols + c] - 0.5 * v[r] * x[c]).epsilon(1e-14));
                }
            }
        }
    }
}

}  // namespace

TEST_CASE("scalar reference against long double") { check_table(kernels::scalar_table()); }

TEST_CASE("vector variant against long double and reference") {
    const auto* avx = kernels::avx2_table();
    if (avx == nullptr) {
        MESSAGE("AVX2 variant unavailable on this build or CPU");
        return;
    }
    check_table(*avx);
    // Element-wise kernels must agree bit for bit with the reference when no FMA contraction differs.
    oracle::Gen g(5);
    const auto x = random_vec(g, 37);
    auto y1 = random_vec(g, 37);
    auto y2 = y1;
    kernels::scalar_table().axpy(2.0, x.data(), y1.data(), x.size());
    avx->axpy(2.0, x.data(), y2.data(), x.size());
    CHECK(y1 == y2);
}

TEST_CASE("dispatch honours the environment override") {
    const char* env = std::getenv("SPOTCAST_KERNELS");
    if (env != nullptr && std::string_view(env) == "scalar") {
        CHECK(kernels::active().name == kernels::scalar_table().name);
    } else if (kernels::avx2_table() != nullptr) {
        CHECK(kernels::active().name == kernels::avx2_table()->name);
    } else {
        CHECK(kernels::active().name == kernels::scalar_table().name);
    }
}

TEST_CASE("span wrappers check shapes") {
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(kernels::dot(a, b) == 32.0);
    CHECK(kernels::sum_sq_diff(a, b) == 27.0);
    CHECK_THROWS_AS((void)kernels::dot(a, std::vector<double>{1.0}), std::invalid_argument);
    std::vector<double> out(1);
    kernels::gemv(a, b, std::vector<double>{1.0}, out);
    CHECK(out[0] == 33.0);
    std::vector<double> bad(2);
    CHECK_THROWS_AS(kernels::gemv(a, b, {}, bad), std::invalid_argument);
}
