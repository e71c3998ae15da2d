#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spotcast/linear_models.hpp"
#include "spotcast/optim.hpp"

namespace spotcast::linear {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kChiSquare2At1Percent = 9.2103;

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(std::span<const double> v) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (double x : v) m.variance += (x - m.mean) * (x - m.mean);
    m.variance /= static_cast<double>(v.size());
    return m;
}

// (m, u, v1, v2) -> params. mean = x̄ + sd m, omega = var e^u, (alpha, beta) on the open simplex.
GarchParams decode(std::span<const double> z, const Moments& mo) {
    GarchParams g;
    g.mean = mo.mean + std::sqrt(mo.variance) * z[0];
    g.omega = mo.variance * std::exp(z[1]);
    const double mx = std::max({0.0, z[2], z[3]});
    const double e0 = std::exp(-mx);
    const double e1 = std::exp(z[2] - mx);
    const double e2 = std::exp(z[3] - mx);
    const double denom = e0 + e1 + e2;
    g.alpha = e1 / denom;
    g.beta = e2 / denom;
    return g;
}

std::array<double, 4> encode_start(double alpha, double beta) {
    const double rest = 1.0 - alpha - beta;
    return {0.0, std::log(rest), std::log(alpha / rest), std::log(beta / rest)};
}

}  // namespace

bool GarchParams::valid() const noexcept {
    return std::isfinite(omega) && omega > 0.0 && alpha >= 0.0 && beta >= 0.0 &&
           alpha + beta < 1.0 && std::isfinite(mean);
}

double garch_log_likelihood(const GarchParams& params, std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("garch_log_likelihood: need 2 values");
    if (!params.valid()) throw std::invalid_argument("garch_log_likelihood: invalid parameters");
    double sigma2 = moments(values).variance;
    if (!(sigma2 > 0.0)) sigma2 = params.long_run_variance();
    double ll = 0.0;
    double prev_eps2 = 0.0;
    for (std::size_t t = 0; t < values.size(); ++t) {
        if (t > 0) sigma2 = params.omega + params.alpha * prev_eps2 + params.beta * sigma2;
        const double eps = values[t] - params.mean;
        prev_eps2 = eps * eps;
        ll -= 0.5 * (kLog2Pi + std::log(sigma2) + prev_eps2 / sigma2);
    }
    return ll;
}

GarchFit fit_garch(std::span<const double> values) {
    if (values.size() < 500) {
        throw std::invalid_argument("fit_garch: need at least 500 values, got " +
                                    std::to_string(values.size()));
    }
    const Moments mo = moments(values);
    if (!(mo.variance > 0.0)) throw std::domain_error("fit_garch: constant input");

    const optim::Objective objective = [&](std::span<const double> z) {
        const GarchParams g = decode(z, mo);
        if (!g.valid()) return std::numeric_limits<double>::infinity();
        return -garch_log_likelihood(g, values);
    };

    constexpr std::array<std::array<double, 2>, 5> kStarts{
        {{0.05, 0.90}, {0.10, 0.80}, {0.15, 0.60}, {0.05, 0.50}, {0.02, 0.05}}};
    constexpr std::array<double, 4> kSteps{0.05, 0.3, 0.5, 0.5};
    optim::NelderMeadOptions options;
    options.max_evaluations = 6000;
    options.f_abs_tolerance = 1e-9;
    options.x_tolerance = 1e-7;

    GarchFit best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    std::vector<GarchFit> results;
    for (const auto& s : kStarts) {
        const auto z0 = encode_start(s[0], s[1]);
        const auto r = optim::nelder_mead(objective, {z0.begin(), z0.end()}, kSteps, options);
        GarchFit f;
        f.params = decode(r.x, mo);
        f.log_likelihood = -r.value;
        f.converged = r.converged;
        f.evaluations = r.evaluations;
        results.push_back(f);
        best.evaluations += r.evaluations;
        best.start_log_likelihoods.push_back(f.log_likelihood);
    }
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& f : results) top = std::max(top, f.log_likelihood);
    // Starts that end on the same likelihood plateau resolve to the least persistent point;
    // the plateau appears when alpha ~ 0 leaves beta unidentified.
    const GarchFit* chosen = nullptr;
    for (const auto& f : results) {
        if (f.log_likelihood < top - 1e-4) continue;
        if (!chosen || f.params.persistence() < chosen->params.persistence()) chosen = &f;
    }
    best.params = chosen->params;
    best.log_likelihood = chosen->log_likelihood;
    best.converged = chosen->converged;

    // Under constant variance beta is unidentified and the optimum wanders to the
    // alpha + beta -> 1 boundary, so heteroskedasticity must pass a likelihood-ratio test.
    const GarchParams flat{mo.variance, 0.0, 0.0, mo.mean};
    const double flat_ll = garch_log_likelihood(flat, values);
    if (2.0 * (best.log_likelihood - flat_ll) < kChiSquare2At1Percent) {
        best.params = flat;
        best.log_likelihood = flat_ll;
        best.converged = true;
        best.constant_variance = true;
    }
    return best;
}

GarchForecast garch_forecast(const GarchParams& params, double last_eps2, double last_sigma2,
                             std::size_t h) {
    if (!params.valid()) throw std::invalid_argument("garch_forecast: invalid parameters");
    GarchForecast fc;
    fc.mean.assign(h, params.mean);
    fc.variance.resize(h);
    double s2 = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
        s2 = k == 0 ? params.omega + params.alpha * last_eps2 + params.beta * last_sigma2
                    : params.omega + (params.alpha + params.beta) * s2;
        fc.variance[k] = s2;
    }
    return fc;
}

GarchForecast garch_forecast(const GarchParams& params, std::span<const double> recent,
                             std::size_t h) {
    if (recent.empty()) throw std::invalid_argument("garch_forecast: need at least 1 recent value");
    if (!params.valid()) throw std::invalid_argument("garch_forecast: invalid parameters");
    double sigma2 = recent.size() > 1 ? moments(recent).variance : params.long_run_variance();
    if (!(sigma2 > 0.0)) sigma2 = params.long_run_variance();
    double eps2 = 0.0;
    for (std::size_t t = 0; t < recent.size(); ++t) {
        if (t > 0) sigma2 = params.omega + params.alpha * eps2 + params.beta * sigma2;
        const double e = recent[t] - params.mean;
        eps2 = e * e;
    }
    return garch_forecast(params, eps2, sigma2, h);
}

}  // namespace spotcast::linear
