#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spotcast::linear {

/// gamma(h) = (1/n) sum_t (x_t - mean)(x_{t+h} - mean) for h = 0..max_lag. Needs max_lag < n/2.
[[nodiscard]] std::vector<double> autocovariance(std::span<const double> values,
                                                 std::size_t max_lag);

struct LevinsonResult {
    std::vector<double> coefficients;  ///< phi_1..phi_p
    double innovation_variance = 0.0;
};

/// Yule-Walker AR(order) coefficients from autocovariances gamma(0..order).
[[nodiscard]] LevinsonResult levinson_durbin(std::span<const double> autocov, std::size_t order);

/// Best linear predictor of X_{t+h} from the n most recent values.
struct LinearPredictor {
    double intercept = 0.0;
    /// lag_coeffs[0] weights the most recent value.
    std::vector<double> lag_coeffs;
    std::size_t horizon = 1;
    double mean = 0.0;

    /// recent is chronological; only its last lag_coeffs.size() entries are used.
    [[nodiscard]] double predict(std::span<const double> recent) const;
};

/// Solves Gamma a = (gamma(h), ..., gamma(h+n-1)); intercept = mean * (1 - sum a).
[[nodiscard]] LinearPredictor fit_linear_predictor(std::span<const double> values, std::size_t lags,
                                                   std::size_t horizon = 1);

/// Iterates a one-step predictor h times, feeding predictions back in.
[[nodiscard]] std::vector<double> linear_forecast(const LinearPredictor& predictor,
                                                  std::span<const double> recent, std::size_t h);

struct ArmaParams {
    std::vector<double> ar;  ///< phi_1..phi_p
    std::vector<double> ma;  ///< theta_1..theta_q
    double sigma2 = 1.0;
    double mean = 0.0;

    [[nodiscard]] std::size_t p() const noexcept { return ar.size(); }
    [[nodiscard]] std::size_t q() const noexcept { return ma.size(); }
};

/// True when every root of 1 - phi_1 z - ... - phi_p z^p lies strictly outside the unit circle.
[[nodiscard]] bool is_causal(std::span<const double> ar);
/// True when every root of 1 + theta_1 z + ... + theta_q z^q lies strictly outside the unit circle.
[[nodiscard]] bool is_invertible(std::span<const double> ma);
/// Reflects roots inside or on the unit circle to the outside.
[[nodiscard]] std::vector<double> make_causal(std::span<const double> ar);
[[nodiscard]] std::vector<double> make_invertible(std::span<const double> ma);

/**
 * Hannan-Rissanen ARMA(p, q) estimate.
 *
 * A long AR of order ceil(10 log10 n) fitted by Yule-Walker supplies
 * innovation estimates; x_t is then regressed on p lagged values and q
 * lagged innovations. AR roots are reflected for causality and MA roots
 * for invertibility. Needs n >= 50 + 10 (p + q).
 */
[[nodiscard]] ArmaParams fit_arma(std::span<const double> values, std::size_t p, std::size_t q);

/// Innovations implied by params over the window, with zero pre-sample innovations.
[[nodiscard]] std::vector<double> arma_innovations(const ArmaParams& params,
                                                   std::span<const double> recent);

/// Conditional-expectation forecast with future innovations set to zero.
[[nodiscard]] std::vector<double> arma_forecast(const ArmaParams& params,
                                                std::span<const double> recent, std::size_t h);
/// As above with the recent innovations supplied (same length as recent).
[[nodiscard]] std::vector<double> arma_forecast(const ArmaParams& params,
                                                std::span<const double> recent,
                                                std::span<const double> innovations, std::size_t h);

struct AicCandidate {
    std::size_t p = 0;
    std::size_t q = 0;
    double aic = 0.0;
};

/// Minimum AIC; ties go to smaller p + q, then smaller p.
[[nodiscard]] AicCandidate select_min_aic(std::span<const AicCandidate> candidates);

/// n ln(sigma2) + 2 (p + q + 1) over the grid 0..p_max x 0..q_max (both <= 3).
[[nodiscard]] AicCandidate order_select_aic(std::span<const double> values, std::size_t p_max,
                                            std::size_t q_max);

struct GarchParams {
    double omega = 0.1;
    double alpha = 0.0;
    double beta = 0.0;
    double mean = 0.0;

    [[nodiscard]] double persistence() const noexcept { return alpha + beta; }
    [[nodiscard]] double long_run_variance() const noexcept {
        return omega / (1.0 - alpha - beta);
    }
    /// omega > 0, alpha >= 0, beta >= 0, alpha + beta < 1.
    [[nodiscard]] bool valid() const noexcept;
};

struct GarchFit {
    GarchParams params;
    double log_likelihood = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
    /// Log-likelihood reached from each start.
    std::vector<double> start_log_likelihoods;
    /// The unrestricted optimum did not beat constant variance at the 1% level, which was kept.
    bool constant_variance = false;
};

/// Gaussian log-likelihood; sigma_0^2 is the sample variance of values.
[[nodiscard]] double garch_log_likelihood(const GarchParams& params,
                                          std::span<const double> values);

/**
 * Gaussian GARCH(1,1) maximum likelihood with mean.
 *
 * Nelder-Mead over omega = var * exp(u) and (alpha, beta) mapped onto the
 * open simplex through a two-way logistic, started from five moment-based
 * points. Needs at least 500 values.
 */
[[nodiscard]] GarchFit fit_garch(std::span<const double> values);

struct GarchForecast {
    std::vector<double> mean;
    std::vector<double> variance;
};

/// Variance path from the last squared shock and conditional variance.
[[nodiscard]] GarchForecast garch_forecast(const GarchParams& params, double last_eps2,
                                           double last_sigma2, std::size_t h);
/// Filters recent through the variance recursion, then forecasts h steps.
[[nodiscard]] GarchForecast garch_forecast(const GarchParams& params,
                                           std::span<const double> recent, std::size_t h);

}  // namespace spotcast::linear
