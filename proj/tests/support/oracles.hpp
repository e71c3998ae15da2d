#pragma once
// Independent reference implementations used as test oracles. They use the
// standard library generators rather than the library's own RNG streams.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double normal_logpdf(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}
    double normal() { return n_(engine_); }
    double uniform() { return u_(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> n_{0.0, 1.0};
    std::uniform_real_distribution<double> u_{0.0, 1.0};
};

/// x_t = mean + phi (x_{t-1} - mean) + sigma e_t, started at the mean after a burn-in.
inline std::vector<double> ar1(std::size_t n, double phi, double sigma, std::uint64_t seed,
                               double mean = 0.0) {
    Gen g(seed);
    std::vector<double> x(n);
    double v = 0.0;
    for (int k = 0; k < 500; ++k) v = phi * v + sigma * g.normal();
    for (auto& xi : x) {
        v = phi * v + sigma * g.normal();
        xi = mean + v;
    }
    return x;
}

/// Discretized jump diffusion on X: drift + phi X + sigma xi, plus mu_j + sigma_j xi_j w.p. p.
inline std::vector<double> jump_ar1(std::size_t n, double drift, double phi, double sigma,
                                    double mu_j, double sigma_j, double p, std::uint64_t seed) {
    Gen g(seed);
    std::vector<double> x(n);
    double v = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const bool jump = g.uniform() < p;
        v = drift + phi * v + sigma * g.normal();
        const double size = mu_j + sigma_j * g.normal();
        if (jump) v += size;
        x[t] = v;
    }
    return x;
}

/// GARCH(1,1) with zero mean from the stationary variance, after a burn-in.
inline std::vector<double> garch11(std::size_t n, double omega, double alpha, double beta,
                                   std::uint64_t seed) {
    Gen g(seed);
    double s2 = omega / (1.0 - alpha - beta);
    double eps = 0.0;
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n + 1000; ++t) {
        s2 = omega + alpha * eps * eps + beta * s2;
        eps = std::sqrt(s2) * g.normal();
        if (t >= 1000) x[t - 1000] = eps;
    }
    return x;
}

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 50) {
    const auto simpson = [&](double lo, double hi, double flo, double fmid, double fhi) {
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    };
    const std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
            int d) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            const double flm = f(lm), frm = f(rm);
            const double left = simpson(lo, mid, flo, flm, fmid);
            const double right = simpson(mid, hi, fmid, frm, fhi);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
                return left + right + (left + right - whole) / 15.0;
            }
            return rec(lo, mid, flo, flm, fmid, left, eps / 2, d - 1) +
                   rec(mid, hi, fmid, frm, fhi, right, eps / 2, d - 1);
        };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, depth);
}

/// Fraction of values satisfying pred.
template <typename T, typename Pred>
double share(const std::vector<T>& v, Pred pred) {
    std::size_t k = 0;
    for (const auto& x : v) k += pred(x) ? 1 : 0;
    return static_cast<double>(k) / static_cast<double>(v.size());
}

}  // namespace oracle
