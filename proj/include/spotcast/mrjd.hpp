#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spotcast/series.hpp"

namespace spotcast::mrjd {

/// f(t) = s1 sin(2 pi t) + s2 cos(2 pi t) + s3 sin(4 pi t) + s4 cos(4 pi t) + s5, t in years.
struct SeasonalCoeffs {
    std::array<double, 5> s{};

    [[nodiscard]] double evaluate(double t) const noexcept;
};

/**
 * Discretized mean-reverting jump diffusion on the deseasonalized log price:
 *
 *   X_t = alpha dt + phi X_{t-1} + sigma xi                    w.p. 1 - lambda_dt
 *   X_t = alpha dt + phi X_{t-1} + sigma xi + mu_j + sigma_j xi_j  w.p. lambda_dt
 *
 * sigma is the per-step standard deviation; no sqrt(dt) factor is applied.
 */
struct MrjdParams {
    double alpha = 0.0;
    double phi = 0.0;
    double sigma = 1.0;
    double mu_j = 0.0;
    double sigma_j = 1.0;
    double lambda_dt = 0.0;
    double dt = 1.0 / 365.0;

    /// phi < 1, sigma > 0, sigma_j > 0, 0 <= lambda_dt <= 1, dt > 0.
    [[nodiscard]] bool valid() const noexcept;
    /// Mean-reversion speed (1 - phi) / dt.
    [[nodiscard]] double kappa() const noexcept { return (1.0 - phi) / dt; }
};

/// Monte Carlo price paths, path-major: values[path * horizon.size() + step].
struct SimulatedPaths {
    std::size_t n_paths = 0;
    std::vector<HourStamp> horizon;
    std::vector<double> values;
    std::uint64_t seed = 0;
    /// Constant added to prices before the log transform; subtract it to return to EUR/MWh.
    double shift = 0.0;

    [[nodiscard]] double at(std::size_t path, std::size_t step) const {
        return values[path * horizon.size() + step];
    }
};

/// Least squares on the five basis functions of f(t).
[[nodiscard]] SeasonalCoeffs fit_seasonality(std::span<const double> log_prices,
                                             std::span<const double> times);

/// Shift c >= 0 such that min(prices) + c >= min_level.
[[nodiscard]] double choose_shift(std::span<const double> prices, double min_level = 0.01);

/// X_t = ln(P_t + shift) - f(t). Throws when a shifted price is not positive.
[[nodiscard]] std::vector<double> deseasonalize_log(std::span<const double> prices,
                                                    const SeasonalCoeffs& coeffs,
                                                    std::span<const double> times,
                                                    double shift = 0.0);

/// Density of X_t given X_{t-1}: the two-component normal mixture.
[[nodiscard]] double transition_density(const MrjdParams& params, double x_prev, double x);

/// sum_t ln f(X_t | X_{t-1}) over t = 1..n-1.
[[nodiscard]] double mrjd_loglik(const MrjdParams& params, std::span<const double> x);

struct CalibrationResult {
    MrjdParams params;
    double log_likelihood = 0.0;
    bool converged = false;
    /// The diffusion variance collapsed toward zero; the fit is not meaningful.
    bool degenerate = false;
    std::size_t evaluations = 0;
    /// Log-likelihood at each of the five initial points.
    std::vector<double> start_log_likelihoods;
    /// The jump terms were not significant at the 1% level; the Gaussian AR(1) fit was kept.
    bool jumps_rejected = false;
};

/**
 * Maximum likelihood for the discretized model.
 *
 * Nelder-Mead runs on unconstrained coordinates: phi through a shifted
 * logistic onto (-1, 1), sigma^2 and sigma_j^2 through exp, lambda_dt
 * through a logistic. Five deterministic starts derive from an AR(1)
 * regression and the tails of its residuals. The jump-free AR(1) fit is
 * returned instead unless the jump terms raise the log-likelihood by a
 * chi-square(3) margin at the 1% level. Needs at least 100 values;
 * throws std::domain_error on constant input.
 */
[[nodiscard]] CalibrationResult calibrate_mrjd(std::span<const double> x, double dt);

/**
 * Simulates n_paths price paths over the horizon starting from start_x.
 *
 * Each path draws from its own stream seeded by (seed, path index), so the
 * output is bit-identical for any thread count. times[k] is the year
 * position used in f for step k. Prices are exp(f(t) + X_t).
 */
[[nodiscard]] SimulatedPaths simulate_mrjd(const MrjdParams& params, const SeasonalCoeffs& coeffs,
                                           double start_x, std::span<const HourStamp> horizon,
                                           std::span<const double> times, std::size_t n_paths,
                                           std::uint64_t seed, unsigned threads = 1,
                                           double shift = 0.0);

/// Type-7 empirical quantile of sorted values.
[[nodiscard]] double empirical_quantile(std::span<const double> sorted, double q);

/// Pointwise median as the forecast, optional (lower, upper) quantile bands. Shift is undone.
[[nodiscard]] ForecastResult mrjd_forecast(const SimulatedPaths& paths,
                                           std::optional<std::pair<double, double>> quantiles = {});

/// Calibrated seasonal + stochastic model on daily average prices.
struct MrjdModel {
    SeasonalCoeffs seasonal;
    CalibrationResult calibration;
    double shift = 0.0;
    double last_x = 0.0;
    DayStamp last_day = 0;
};

/// Fits seasonality on log daily prices at midnight year positions, then calibrates X.
[[nodiscard]] MrjdModel fit_mrjd_model(const DailySeries& daily, double dt = 1.0 / 365.0);

/// Simulates the days following the model's last day; horizon stamps are midnights.
[[nodiscard]] SimulatedPaths simulate_days(const MrjdModel& model, std::size_t days,
                                           std::size_t n_paths, std::uint64_t seed,
                                           unsigned threads = 1);

}  // namespace spotcast::mrjd
