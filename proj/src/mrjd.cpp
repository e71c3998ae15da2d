#include "spotcast/mrjd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>

#include "spotcast/lstsq.hpp"
#include "spotcast/optim.hpp"
#include "spotcast/random.hpp"

namespace spotcast::mrjd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLog2Pi = 1.8378770664093454836;

double log_normal_density(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (kLog2Pi + std::log(var) + d * d / var);
}

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct Scale {
    double sd = 1.0;
};

// z = (a, v_phi, u_sigma, m_j, w_sigma_j, l) with every location/scale quantity in units of sd(X).
MrjdParams decode(std::span<const double> z, const Scale& sc, double dt) {
    MrjdParams p;
    p.dt = dt;
    p.alpha = z[0] * sc.sd / dt;
    p.phi = 2.0 * logistic(z[1]) - 1.0;
    p.sigma = sc.sd * std::exp(0.5 * z[2]);
    p.mu_j = z[3] * sc.sd;
    p.sigma_j = sc.sd * std::exp(0.5 * z[4]);
    p.lambda_dt = logistic(z[5]);
    return p;
}

std::vector<double> encode(const MrjdParams& p, const Scale& sc) {
    const double phi01 = std::clamp((p.phi + 1.0) / 2.0, 1e-6, 1.0 - 1e-6);
    return {p.alpha * p.dt / sc.sd,
            logit(phi01),
            2.0 * std::log(p.sigma / sc.sd),
            p.mu_j / sc.sd,
            2.0 * std::log(p.sigma_j / sc.sd),
            logit(std::clamp(p.lambda_dt, 1e-6, 1.0 - 1e-6))};
}

double median_of(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), mid));
    return m;
}

constexpr double kChiSquare3At1Percent = 11.3449;

// Conditional Gaussian MLE with lambda_dt = 0: least squares on the lagged value.
std::optional<MrjdParams> gaussian_ar1(std::span<const double> x, double dt) {
    const std::size_t m = x.size() - 1;
    double mx = 0.0, my = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        mx += x[t];
        my += x[t + 1];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        sxx += (x[t] - mx) * (x[t] - mx);
        sxy += (x[t] - mx) * (x[t + 1] - my);
    }
    MrjdParams p;
    p.dt = dt;
    p.phi = sxy / sxx;
    if (!(std::abs(p.phi) < 1.0)) return std::nullopt;
    const double c = my - p.phi * mx;
    double rss = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double e = x[t + 1] - c - p.phi * x[t];
        rss += e * e;
    }
    p.alpha = c / dt;
    p.sigma = std::sqrt(rss / static_cast<double>(m));
    p.lambda_dt = 0.0;
    p.mu_j = 0.0;
    p.sigma_j = p.sigma;
    if (!p.valid()) return std::nullopt;
    return p;
}

// Five starting points from an AR(1) regression and its residual tails.
std::vector<MrjdParams> initial_points(std::span<const double> x, double dt) {
    // Exact test: a rounded mean can leave a tiny nonzero sxx on constant input.
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) throw std::domain_error("calibrate_mrjd: constant input, degenerate fit");
    const std::size_t m = x.size() - 1;
    double mx = 0.0, my = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        mx += x[t];
        my += x[t + 1];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        sxx += (x[t] - mx) * (x[t] - mx);
        sxy += (x[t] - mx) * (x[t + 1] - my);
    }
    if (!(sxx > 0.0)) throw std::domain_error("calibrate_mrjd: constant input, degenerate fit");
    const double phi = std::clamp(sxy / sxx, -0.95, 0.95);
    const double intercept = my - phi * mx;

    std::vector<double> resid(m);
    double var = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        resid[t] = x[t + 1] - intercept - phi * x[t];
        var += resid[t] * resid[t];
    }
    var /= static_cast<double>(m);
    const double med = median_of(resid);
    std::vector<double> dev(m);
    for (std::size_t t = 0; t < m; ++t) dev[t] = std::abs(resid[t] - med);
    double robust_sd = 1.4826 * median_of(dev);
    if (!(robust_sd > 0.0)) robust_sd = std::sqrt(var);
    if (!(robust_sd > 0.0)) throw std::domain_error("calibrate_mrjd: residuals vanish, degenerate fit");

    double tail_sum = 0.0, tail_sq = 0.0;
    std::size_t tail_n = 0;
    for (double r : resid) {
        if (std::abs(r - med) > 3.0 * robust_sd) {
            tail_sum += r;
            tail_sq += r * r;
            ++tail_n;
        }
    }
    double lambda0 = 0.01;
    double mu0 = 0.0;
    double sj0 = 3.0 * robust_sd;
    if (tail_n > 0) {
        lambda0 = std::clamp(static_cast<double>(tail_n) / static_cast<double>(m), 0.005, 0.2);
        mu0 = tail_sum / static_cast<double>(tail_n);
        const double tail_var = tail_sq / static_cast<double>(tail_n) - mu0 * mu0;
        sj0 = std::max(std::sqrt(std::max(tail_var, 0.0)), robust_sd);
    }

    auto make = [&](double lambda, double mu_j, double sigma_j) {
        MrjdParams p;
        p.dt = dt;
        p.phi = phi;
        p.sigma = robust_sd;
        p.mu_j = mu_j;
        p.sigma_j = sigma_j;
        p.lambda_dt = lambda;
        p.alpha = (intercept - lambda * mu_j) / dt;
        return p;
    };
    return {make(lambda0, mu0, sj0), make(0.5 * lambda0, mu0, sj0),
            make(std::min(2.0 * lambda0, 0.4), mu0, sj0), make(0.05, 0.0, 3.0 * robust_sd),
            make(0.02, mu0, 2.0 * robust_sd)};
}

}  // namespace

double SeasonalCoeffs::evaluate(double t) const noexcept {
    return s[0] * std::sin(kTwoPi * t) + s[1] * std::cos(kTwoPi * t) +
           s[2] * std::sin(2.0 * kTwoPi * t) + s[3] * std::cos(2.0 * kTwoPi * t) + s[4];
}

bool MrjdParams::valid() const noexcept {
    return std::isfinite(alpha) && std::isfinite(mu_j) && phi < 1.0 && sigma > 0.0 &&
           sigma_j > 0.0 && lambda_dt >= 0.0 && lambda_dt <= 1.0 && dt > 0.0 &&
           std::isfinite(sigma) && std::isfinite(sigma_j);
}

SeasonalCoeffs fit_seasonality(std::span<const double> log_prices, std::span<const double> times) {
    if (log_prices.size() != times.size()) {
        throw std::invalid_argument("fit_seasonality: prices and times differ in length");
    }
    if (log_prices.size() < 5) throw std::invalid_argument("fit_seasonality: need at least 5 points");
    std::vector<double> design(log_prices.size() * 5);
    for (std::size_t i = 0; i < log_prices.size(); ++i) {
        double* row = design.data() + i * 5;
        const double t = times[i];
        row[0] = std::sin(kTwoPi * t);
        row[1] = std::cos(kTwoPi * t);
        row[2] = std::sin(2.0 * kTwoPi * t);
        row[3] = std::cos(2.0 * kTwoPi * t);
        row[4] = 1.0;
    }
    const auto fit = linalg::least_squares(design, 5, log_prices);
    SeasonalCoeffs c;
    std::copy(fit.coefficients.begin(), fit.coefficients.end(), c.s.begin());
    return c;
}

double choose_shift(std::span<const double> prices, double min_level) {
    if (prices.empty()) return 0.0;
    const double lo = *std::min_element(prices.begin(), prices.end());
    return lo >= min_level ? 0.0 : min_level - lo;
}

std::vector<double> deseasonalize_log(std::span<const double> prices, const SeasonalCoeffs& coeffs,
                                      std::span<const double> times, double shift) {
    if (prices.size() != times.size()) {
        throw std::invalid_argument("deseasonalize_log: prices and times differ in length");
    }
    std::vector<double> x(prices.size());
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const double p = prices[i] + shift;
        if (!(p > 0.0)) {
            throw std::domain_error("deseasonalize_log: non-positive price at index " +
                                    std::to_string(i) + "; configure a shift");
        }
        x[i] = std::log(p) - coeffs.evaluate(times[i]);
    }
    return x;
}

double transition_density(const MrjdParams& params, double x_prev, double x) {
    const double m = params.alpha * params.dt + params.phi * x_prev;
    const double v1 = params.sigma * params.sigma;
    const double v2 = v1 + params.sigma_j * params.sigma_j;
    return (1.0 - params.lambda_dt) * std::exp(log_normal_density(x, m, v1)) +
           params.lambda_dt * std::exp(log_normal_density(x, m + params.mu_j, v2));
}

double mrjd_loglik(const MrjdParams& params, std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("mrjd_loglik: need at least 2 values");
    if (!params.valid()) throw std::invalid_argument("mrjd_loglik: parameters violate constraints");
    const double drift = params.alpha * params.dt;
    const double v1 = params.sigma * params.sigma;
    const double v2 = v1 + params.sigma_j * params.sigma_j;
    const double p = params.lambda_dt;
    const double log_stay = p < 1.0 ? std::log1p(-p) : -std::numeric_limits<double>::infinity();
    const double log_jump = p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    double ll = 0.0;
    for (std::size_t t = 1; t < x.size(); ++t) {
        const double m = drift + params.phi * x[t - 1];
        if (p == 0.0) {
            ll += log_normal_density(x[t], m, v1);
            continue;
        }
        if (p == 1.0) {
            ll += log_normal_density(x[t], m + params.mu_j, v2);
            continue;
        }
        const double a = log_stay + log_normal_density(x[t], m, v1);
        const double b = log_jump + log_normal_density(x[t], m + params.mu_j, v2);
        const double hi = std::max(a, b);
        ll += hi + std::log1p(std::exp(std::min(a, b) - hi));
    }
    return ll;
}

CalibrationResult calibrate_mrjd(std::span<const double> x, double dt) {
    if (x.size() < 100) {
        throw std::invalid_argument("calibrate_mrjd: need at least 100 values, got " +
                                    std::to_string(x.size()));
    }
    if (!(dt > 0.0)) throw std::invalid_argument("calibrate_mrjd: dt must be positive");
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("calibrate_mrjd: non-finite input");
    }

    const auto starts = initial_points(x, dt);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    const Scale scale{std::sqrt(var / static_cast<double>(x.size()))};

    const optim::Objective objective = [&](std::span<const double> z) {
        const MrjdParams p = decode(z, scale, dt);
        if (!p.valid()) return std::numeric_limits<double>::infinity();
        return -mrjd_loglik(p, x);
    };

    const std::vector<double> steps{0.02, 0.5, 0.5, 0.5, 0.5, 0.5};
    optim::NelderMeadOptions options;
    options.max_evaluations = 8000;
    options.f_abs_tolerance = 1e-9;
    options.x_tolerance = 1e-7;
    options.restarts = 3;

    CalibrationResult best;
    best.log_likelihood = -std::numeric_limits<double>::infinity();
    for (const MrjdParams& start : starts) {
        const double start_ll = mrjd_loglik(start, x);
        best.start_log_likelihoods.push_back(start_ll);
        const auto r = optim::nelder_mead(objective, encode(start, scale), steps, options);
        best.evaluations += r.evaluations;
        const double ll = -r.value;
        if (ll > best.log_likelihood) {
            best.log_likelihood = ll;
            best.params = decode(r.x, scale, dt);
            best.converged = r.converged;
        }
    }
    // With no jumps mu_j and sigma_j are unidentified and lambda_dt drifts freely,
    // so the jump terms must earn their three parameters.
    if (const auto ar1 = gaussian_ar1(x, dt)) {
        const double ar1_ll = mrjd_loglik(*ar1, x);
        if (2.0 * (best.log_likelihood - ar1_ll) < kChiSquare3At1Percent) {
            best.params = *ar1;
            best.log_likelihood = ar1_ll;
            best.converged = true;
            best.jumps_rejected = true;
        }
    }
    best.degenerate = !(best.params.sigma > 1e-6 * scale.sd);
    for (double s : best.start_log_likelihoods) {
        if (!(best.log_likelihood > s)) best.degenerate = true;
    }
    return best;
}

SimulatedPaths simulate_mrjd(const MrjdParams& params, const SeasonalCoeffs& coeffs,
                             double start_x, std::span<const HourStamp> horizon,
                             std::span<const double> times, std::size_t n_paths,
                             std::uint64_t seed, unsigned threads, double shift) {
    if (n_paths < 1) throw std::invalid_argument("simulate_mrjd: n_paths must be >= 1");
    if (horizon.size() != times.size()) {
        throw std::invalid_argument("simulate_mrjd: horizon and times differ in length");
    }
    if (!(params.phi < 1.0) || !(params.sigma >= 0.0) || !(params.sigma_j >= 0.0) ||
        !(params.lambda_dt >= 0.0 && params.lambda_dt <= 1.0) || !(params.dt > 0.0)) {
        throw std::invalid_argument("simulate_mrjd: parameters violate constraints");
    }

    SimulatedPaths out;
    out.n_paths = n_paths;
    out.horizon.assign(horizon.begin(), horizon.end());
    out.seed = seed;
    out.shift = shift;
    const std::size_t steps = horizon.size();
    out.values.resize(n_paths * steps);

    std::vector<double> season(steps);
    for (std::size_t k = 0; k < steps; ++k) season[k] = coeffs.evaluate(times[k]);
    const double drift = params.alpha * params.dt;

    auto run_paths = [&](std::size_t first, std::size_t last) {
        for (std::size_t path = first; path < last; ++path) {
            rng::Stream stream(rng::derive_seed(seed, static_cast<std::uint64_t>(path)));
            double xv = start_x;
            double* row = out.values.data() + path * steps;
            for (std::size_t k = 0; k < steps; ++k) {
                const bool jump = stream.uniform() < params.lambda_dt;
                const double xi = stream.normal();
                const double xi_j = stream.normal();
                xv = drift + params.phi * xv + params.sigma * xi;
                if (jump) xv += params.mu_j + params.sigma_j * xi_j;
                row[k] = std::exp(season[k] + xv);
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_paths)));
    if (workers == 1) {
        run_paths(0, n_paths);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n_paths + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t first = w * chunk;
            const std::size_t last = std::min(n_paths, first + chunk);
            if (first < last) pool.emplace_back(run_paths, first, last);
        }
    }
    return out;
}

double empirical_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("empirical_quantile: q outside [0,1]");
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ForecastResult mrjd_forecast(const SimulatedPaths& paths,
                             std::optional<std::pair<double, double>> quantiles) {
    if (paths.n_paths == 0) throw std::invalid_argument("mrjd_forecast: no paths");
    if (quantiles) {
        const auto [lo, hi] = *quantiles;
        if (!(lo > 0.0 && lo < 1.0 && hi > 0.0 && hi < 1.0)) {
            throw std::invalid_argument("mrjd_forecast: quantiles must lie in (0, 1)");
        }
        if (!(lo <= 0.5 && 0.5 <= hi)) {
            throw std::invalid_argument("mrjd_forecast: bands must bracket the median");
        }
        if (paths.n_paths < 100) {
            throw std::invalid_argument("mrjd_forecast: quantile bands need at least 100 paths");
        }
    }
    ForecastResult fc;
    fc.model_id = "mrjd";
    fc.horizon = paths.horizon;
    const std::size_t steps = paths.horizon.size();
    fc.values.resize(steps);
    if (quantiles) {
        fc.lower.emplace(steps);
        fc.upper.emplace(steps);
    }
    std::vector<double> column(paths.n_paths);
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t p = 0; p < paths.n_paths; ++p) column[p] = paths.at(p, k);
        std::sort(column.begin(), column.end());
        fc.values[k] = empirical_quantile(column, 0.5) - paths.shift;
        if (quantiles) {
            (*fc.lower)[k] = empirical_quantile(column, quantiles->first) - paths.shift;
            (*fc.upper)[k] = empirical_quantile(column, quantiles->second) - paths.shift;
        }
    }
    fc.metadata["paths"] = std::to_string(paths.n_paths);
    fc.metadata["seed"] = std::to_string(paths.seed);
    return fc;
}

MrjdModel fit_mrjd_model(const DailySeries& daily, double dt) {
    if (daily.size() < 100) throw std::invalid_argument("fit_mrjd_model: need at least 100 days");
    std::vector<double> times(daily.size());
    for (std::size_t i = 0; i < daily.size(); ++i) {
        times[i] = TimePoint::from_stamp(daily.day(i) * 24).year_fraction;
    }
    MrjdModel model;
    model.shift = choose_shift(daily.values);
    std::vector<double> logp(daily.size());
    for (std::size_t i = 0; i < daily.size(); ++i) logp[i] = std::log(daily.values[i] + model.shift);
    model.seasonal = fit_seasonality(logp, times);
    const auto x = deseasonalize_log(daily.values, model.seasonal, times, model.shift);
    model.calibration = calibrate_mrjd(x, dt);
    model.last_x = x.back();
    model.last_day = daily.day(daily.size() - 1);
    return model;
}

SimulatedPaths simulate_days(const MrjdModel& model, std::size_t days, std::size_t n_paths,
                             std::uint64_t seed, unsigned threads) {
    std::vector<HourStamp> horizon(days);
    std::vector<double> times(days);
    for (std::size_t k = 0; k < days; ++k) {
        horizon[k] = (model.last_day + 1 + static_cast<DayStamp>(k)) * 24;
        times[k] = TimePoint::from_stamp(horizon[k]).year_fraction;
    }
    return simulate_mrjd(model.calibration.params, model.seasonal, model.last_x, horizon, times,
                         n_paths, seed, threads, model.shift);
}

}  // namespace spotcast::mrjd
