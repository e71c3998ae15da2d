#include "spotcast/linear_models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

#include "spotcast/kernels.hpp"
#include "spotcast/lstsq.hpp"

namespace spotcast::linear {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Roots of z^k + c_1 z^{k-1} + ... + c_k.
std::vector<std::complex<double>> monic_roots(std::span<const double> c) {
    const auto k = static_cast<Eigen::Index>(c.size());
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index j = 0; j < k; ++j) companion(0, j) = -c[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    std::vector<std::complex<double>> roots;
    for (Eigen::Index i = 0; i < k; ++i) roots.push_back(es.eigenvalues()[i]);
    return roots;
}

// Coefficients c_1..c_k of prod (z - r_i).
std::vector<double> monic_from_roots(std::span<const std::complex<double>> roots) {
    std::vector<std::complex<double>> poly{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= r * poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> c;
    for (std::size_t i = 1; i < poly.size(); ++i) c.push_back(poly[i].real());
    return c;
}

// The reciprocal roots of 1 + s_1 z + ... + s_k z^k are the roots of z^k + s_1 z^{k-1} + ... + s_k.
// Stability of the original polynomial means all of them lie strictly inside the unit circle.
bool reciprocal_roots_inside(std::span<const double> s) {
    if (s.empty()) return true;
    for (const auto& r : monic_roots(s)) {
        if (!(std::abs(r) < 1.0)) return false;
    }
    return true;
}

std::vector<double> reflect_reciprocal_roots(std::span<const double> s) {
    if (s.empty()) return {};
    auto roots = monic_roots(s);
    constexpr double kMaxModulus = 1.0 - 1e-6;
    for (auto& r : roots) {
        const double m = std::abs(r);
        if (m >= 1.0) {
            r = 1.0 / std::conj(r);
            if (std::abs(r) > kMaxModulus) r *= kMaxModulus / std::abs(r);
        }
    }
    return monic_from_roots(roots);
}

}  // namespace

std::vector<double> autocovariance(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (n == 0 || 2 * max_lag >= n) {
        throw std::invalid_argument("autocovariance: max_lag " + std::to_string(max_lag) +
                                    " must be below half the length " + std::to_string(n));
    }
    const double m = mean_of(values);
    std::vector<double> centered(n);
    for (std::size_t i = 0; i < n; ++i) centered[i] = values[i] - m;
    std::vector<double> gamma(max_lag + 1);
    const std::span<const double> c(centered);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        gamma[h] = kernels::dot(c.subspan(0, n - h), c.subspan(h)) / static_cast<double>(n);
    }
    return gamma;
}

LevinsonResult levinson_durbin(std::span<const double> autocov, std::size_t order) {
    if (autocov.size() <= order) {
        throw std::invalid_argument("levinson_durbin: need autocovariances up to the order");
    }
    if (!(autocov[0] > 0.0)) {
        throw linalg::RankDeficientError("levinson_durbin: zero variance");
    }
    LevinsonResult r;
    r.innovation_variance = autocov[0];
    std::vector<double> phi;
    for (std::size_t k = 1; k <= order; ++k) {
        double acc = autocov[k];
        for (std::size_t j = 1; j < k; ++j) acc -= phi[j - 1] * autocov[k - j];
        const double reflection = acc / r.innovation_variance;
        std::vector<double> next(k);
        for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - reflection * phi[k - j - 1];
        next[k - 1] = reflection;
        phi = std::move(next);
        r.innovation_variance *= 1.0 - reflection * reflection;
        if (!(r.innovation_variance > 0.0)) {
            throw linalg::RankDeficientError("levinson_durbin: autocovariance matrix is singular");
        }
    }
    r.coefficients = std::move(phi);
    return r;
}

double LinearPredictor::predict(std::span<const double> recent) const {
    if (recent.size() < lag_coeffs.size()) {
        throw std::invalid_argument("LinearPredictor::predict: need " +
                                    std::to_string(lag_coeffs.size()) + " recent values");
    }
    double v = intercept;
    const std::size_t last = recent.size() - 1;
    for (std::size_t i = 0; i < lag_coeffs.size(); ++i) v += lag_coeffs[i] * recent[last - i];
    return v;
}

LinearPredictor fit_linear_predictor(std::span<const double> values, std::size_t lags,
                                     std::size_t horizon) {
    if (horizon < 1) throw std::invalid_argument("fit_linear_predictor: horizon must be >= 1");
    if (values.empty() || values.size() < 10 * lags) {
        throw std::invalid_argument("fit_linear_predictor: need at least 10 values per lag");
    }
    LinearPredictor lp;
    lp.horizon = horizon;
    lp.mean = mean_of(values);
    if (lags == 0) {
        lp.intercept = lp.mean;
        return lp;
    }
    const auto gamma = autocovariance(values, horizon + lags - 1);
    if (!(gamma[0] > 0.0)) {
        throw linalg::RankDeficientError("fit_linear_predictor: constant input");
    }
    std::vector<double> toeplitz(lags * lags);
    for (std::size_t i = 0; i < lags; ++i) {
        for (std::size_t j = 0; j < lags; ++j) {
            toeplitz[i * lags + j] = gamma[i > j ? i - j : j - i];
        }
    }
    std::vector<double> rhs(lags);
    for (std::size_t i = 0; i < lags; ++i) rhs[i] = gamma[horizon + i];
    lp.lag_coeffs = linalg::solve_spd(toeplitz, rhs);
    double sum = 0.0;
    for (double a : lp.lag_coeffs) sum += a;
    lp.intercept = lp.mean * (1.0 - sum);
    return lp;
}

std::vector<double> linear_forecast(const LinearPredictor& predictor,
                                    std::span<const double> recent, std::size_t h) {
    if (predictor.horizon != 1) {
        throw std::invalid_argument("linear_forecast: iteration needs a one-step predictor");
    }
    std::vector<double> window(recent.begin(), recent.end());
    std::vector<double> out;
    for (std::size_t k = 0; k < h; ++k) {
        const double v = predictor.predict(window);
        window.push_back(v);
        out.push_back(v);
    }
    return out;
}

bool is_causal(std::span<const double> ar) {
    std::vector<double> s(ar.begin(), ar.end());
    for (double& v : s) v = -v;
    return reciprocal_roots_inside(s);
}

bool is_invertible(std::span<const double> ma) { return reciprocal_roots_inside(ma); }

std::vector<double> make_causal(std::span<const double> ar) {
    if (is_causal(ar)) return {ar.begin(), ar.end()};
    std::vector<double> s(ar.begin(), ar.end());
    for (double& v : s) v = -v;
    auto c = reflect_reciprocal_roots(s);
    for (double& v : c) v = -v;
    return c;
}

std::vector<double> make_invertible(std::span<const double> ma) {
    if (is_invertible(ma)) return {ma.begin(), ma.end()};
    return reflect_reciprocal_roots(ma);
}

ArmaParams fit_arma(std::span<const double> values, std::size_t p, std::size_t q) {
    const std::size_t n = values.size();
    if (n < 50 + 10 * (p + q)) {
        throw std::invalid_argument("fit_arma: need at least " + std::to_string(50 + 10 * (p + q)) +
                                    " values for ARMA(" + std::to_string(p) + "," +
                                    std::to_string(q) + ")");
    }
    ArmaParams params;
    params.mean = mean_of(values);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = values[i] - params.mean;

    if (p == 0 && q == 0) {
        params.sigma2 = autocovariance(values, 0)[0];
        if (!(params.sigma2 > 0.0)) throw linalg::RankDeficientError("fit_arma: constant input");
        return params;
    }

    // Stage 1: long autoregression for innovation estimates.
    auto long_order = static_cast<std::size_t>(std::ceil(10.0 * std::log10(static_cast<double>(n))));
    long_order = std::min(long_order, n / 4);
    std::vector<double> z(n, 0.0);
    std::size_t first_z = 0;
    if (q > 0) {
        const auto yw = levinson_durbin(autocovariance(values, long_order), long_order);
        for (std::size_t t = long_order; t < n; ++t) {
            double e = y[t];
            for (std::size_t j = 1; j <= long_order; ++j) e -= yw.coefficients[j - 1] * y[t - j];
            z[t] = e;
        }
        first_z = long_order;
    }

    // Stage 2: regress y_t on lagged y and lagged innovation estimates.
    const std::size_t start = std::max(p, first_z + q);
    const std::size_t cols = p + q;
    const std::size_t rows = n - start;
    std::vector<double> design(rows * cols);
    std::vector<double> rhs(rows);
    for (std::size_t t = start; t < n; ++t) {
        double* row = design.data() + (t - start) * cols;
        for (std::size_t j = 1; j <= p; ++j) row[j - 1] = y[t - j];
        for (std::size_t j = 1; j <= q; ++j) row[p + j - 1] = z[t - j];
        rhs[t - start] = y[t];
    }
    const auto fit = linalg::least_squares(design, cols, rhs);
    params.ar.assign(fit.coefficients.begin(), fit.coefficients.begin() + static_cast<std::ptrdiff_t>(p));
    params.ma.assign(fit.coefficients.begin() + static_cast<std::ptrdiff_t>(p), fit.coefficients.end());
    params.sigma2 = fit.residual_sum_of_squares / static_cast<double>(rows);
    if (!(params.sigma2 > 0.0)) {
        throw linalg::RankDeficientError("fit_arma: regression fits exactly, no noise variance");
    }
    params.ar = make_causal(params.ar);
    params.ma = make_invertible(params.ma);
    return params;
}

std::vector<double> arma_innovations(const ArmaParams& params, std::span<const double> recent) {
    const std::size_t p = params.p();
    const std::size_t q = params.q();
    std::vector<double> z(recent.size(), 0.0);
    for (std::size_t t = p; t < recent.size(); ++t) {
        double e = recent[t] - params.mean;
        for (std::size_t j = 1; j <= p; ++j) e -= params.ar[j - 1] * (recent[t - j] - params.mean);
        for (std::size_t j = 1; j <= q && j <= t; ++j) e -= params.ma[j - 1] * z[t - j];
        z[t] = e;
    }
    return z;
}

std::vector<double> arma_forecast(const ArmaParams& params, std::span<const double> recent,
                                  std::size_t h) {
    return arma_forecast(params, recent, arma_innovations(params, recent), h);
}

std::vector<double> arma_forecast(const ArmaParams& params, std::span<const double> recent,
                                  std::span<const double> innovations, std::size_t h) {
    const std::size_t p = params.p();
    const std::size_t q = params.q();
    if (recent.size() < std::max(p, q)) {
        throw std::invalid_argument("arma_forecast: need at least max(p, q) recent values");
    }
    if (innovations.size() != recent.size()) {
        throw std::invalid_argument("arma_forecast: innovations must align with recent values");
    }
    const std::size_t n = recent.size();
    std::vector<double> y(n + h);
    for (std::size_t i = 0; i < n; ++i) y[i] = recent[i] - params.mean;
    std::vector<double> out(h);
    for (std::size_t k = 1; k <= h; ++k) {
        const std::size_t t = n + k - 1;
        double v = 0.0;
        for (std::size_t j = 1; j <= p; ++j) v += params.ar[j - 1] * y[t - j];
        for (std::size_t j = k; j <= q; ++j) {
            if (t >= j) v += params.ma[j - 1] * innovations[t - j];
        }
        y[t] = v;
        out[k - 1] = params.mean + v;
    }
    return out;
}

AicCandidate select_min_aic(std::span<const AicCandidate> candidates) {
    if (candidates.empty()) throw std::invalid_argument("select_min_aic: no candidates");
    const auto key = [](const AicCandidate& c) { return std::make_tuple(c.aic, c.p + c.q, c.p); };
    return *std::min_element(candidates.begin(), candidates.end(),
                             [&](const AicCandidate& a, const AicCandidate& b) {
                                 return key(a) < key(b);
                             });
}

AicCandidate order_select_aic(std::span<const double> values, std::size_t p_max,
                              std::size_t q_max) {
    if (p_max > 3 || q_max > 3) {
        throw std::invalid_argument("order_select_aic: orders are limited to 3");
    }
    const auto n = static_cast<double>(values.size());
    std::vector<AicCandidate> candidates;
    for (std::size_t p = 0; p <= p_max; ++p) {
        for (std::size_t q = 0; q <= q_max; ++q) {
            try {
                const auto params = fit_arma(values, p, q);
                const double aic =
                    n * std::log(params.sigma2) + 2.0 * static_cast<double>(p + q + 1);
                candidates.push_back({p, q, aic});
            } catch (const linalg::RankDeficientError&) {
                // order not estimable on this sample
            }
        }
    }
    return select_min_aic(candidates);
}

}  // namespace spotcast::linear
