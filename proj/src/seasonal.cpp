#include "spotcast/seasonal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "spotcast/lstsq.hpp"
#include "spotcast/series_io.hpp"

namespace spotcast::seasonal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t weekday_index(DayStamp day) {
    return static_cast<std::size_t>(spotcast::day_of_week(day) - 1);
}

}  // namespace

double DecompositionResult::seasonal_at(std::size_t i) const {
    return seasonal_profile[weekday_index(start + static_cast<DayStamp>(i))];
}

double HarmonicFit::evaluate(double t) const {
    double v = mean_level;
    for (std::size_t k = 0; k < cos_coeffs.size(); ++k) {
        const double arg = kTwoPi * static_cast<double>(k + 1) * t / period;
        v += cos_coeffs[k] * std::cos(arg) + sin_coeffs[k] * std::sin(arg);
    }
    return v;
}

std::vector<double> moving_average(std::span<const double> values, int window) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("moving_average: window must be odd and >= 1, got " +
                                    std::to_string(window));
    }
    if (static_cast<std::size_t>(window) > values.size()) {
        throw std::invalid_argument("moving_average: window " + std::to_string(window) +
                                    " exceeds series length " + std::to_string(values.size()));
    }
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    const std::ptrdiff_t half = window / 2;
    std::vector<double> out(values.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half);
        const std::ptrdiff_t hi = std::min(n - 1, i + half);
        double s = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) s += values[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

WeekdayProfile weekday_profile(const DailySeries& series) {
    if (series.size() < 14) {
        throw std::invalid_argument("weekday_profile: need at least 14 days, got " +
                                    std::to_string(series.size()));
    }
    WeekdayProfile sum{};
    std::array<int, 7> count{};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto k = weekday_index(series.day(i));
        sum[k] += series.values[i];
        ++count[k];
    }
    for (std::size_t k = 0; k < 7; ++k) sum[k] /= static_cast<double>(count[k]);
    return sum;
}

std::vector<double> deseasonalize(std::span<const double> values, DayStamp first_day,
                                  const WeekdayProfile& profile) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = values[i] - profile[weekday_index(first_day + static_cast<DayStamp>(i))];
    }
    return out;
}

std::vector<double> deseasonalize(const DailySeries& series, const WeekdayProfile& profile) {
    return deseasonalize(series.values, series.start, profile);
}

std::vector<double> reseasonalize(std::span<const double> values, DayStamp first_day,
                                  const WeekdayProfile& profile) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = values[i] + profile[weekday_index(first_day + static_cast<DayStamp>(i))];
    }
    return out;
}

std::vector<double> difference(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("difference: need at least 2 values");
    std::vector<double> out(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) out[i] = values[i + 1] - values[i];
    return out;
}

double dickey_fuller_critical_value(Significance significance) noexcept {
    switch (significance) {
        case Significance::OnePercent: return -3.43;
        case Significance::FivePercent: return -2.86;
        case Significance::TenPercent: return -2.57;
    }
    return -2.86;
}

StationarityVerdict dickey_fuller(std::span<const double> values, Significance significance) {
    if (values.size() < 25) {
        throw std::invalid_argument("dickey_fuller: need at least 25 values, got " +
                                    std::to_string(values.size()));
    }
    const std::size_t m = values.size() - 1;
    double mean_lag = 0.0;
    double mean_diff = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        mean_lag += values[t];
        mean_diff += values[t + 1] - values[t];
    }
    mean_lag /= static_cast<double>(m);
    mean_diff /= static_cast<double>(m);

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double x = values[t] - mean_lag;
        const double y = (values[t + 1] - values[t]) - mean_diff;
        sxx += x * x;
        sxy += x * y;
    }
    if (!(sxx > 0.0)) {
        throw std::domain_error("dickey_fuller: lagged level has zero variance (constant input)");
    }
    const double slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t t = 0; t < m; ++t) {
        const double r = ((values[t + 1] - values[t]) - mean_diff) - slope * (values[t] - mean_lag);
        rss += r * r;
    }
    const double se = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    if (!(se > 0.0)) {
        throw std::domain_error("dickey_fuller: regression fits exactly, t-ratio undefined");
    }
    StationarityVerdict v;
    v.statistic = slope / se;
    v.critical_value = dickey_fuller_critical_value(significance);
    v.reject_unit_root = v.statistic < v.critical_value;
    return v;
}

std::optional<int> dominant_period(std::span<const double> values, PeriodRange candidates) {
    if (candidates.min_period < 2 || candidates.max_period < candidates.min_period) {
        throw std::invalid_argument("dominant_period: invalid candidate range");
    }
    const std::size_t n = values.size();
    if (n < 4 * static_cast<std::size_t>(candidates.max_period)) {
        throw std::invalid_argument("dominant_period: need at least 4x the longest candidate period");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = values[i] - mean;

    // One-sided spectrum magnitudes over bins 1..floor((n-1)/2).
    std::vector<double> cos_table(n), sin_table(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
        cos_table[i] = std::cos(a);
        sin_table[i] = std::sin(a);
    }
    const std::size_t bins = (n - 1) / 2;
    std::vector<double> magnitude(bins);
    for (std::size_t k = 1; k <= bins; ++k) {
        double re = 0.0;
        double im = 0.0;
        std::size_t idx = 0;
        for (std::size_t t = 0; t < n; ++t) {
            re += x[t] * cos_table[idx];
            im -= x[t] * sin_table[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        magnitude[k - 1] = std::hypot(re, im);
    }
    std::vector<double> sorted = magnitude;
    const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
    std::nth_element(sorted.begin(), mid, sorted.end());
    double median = *mid;
    if (sorted.size() % 2 == 0) {
        median = 0.5 * (median + *std::max_element(sorted.begin(), mid));
    }

    int best_period = candidates.min_period;
    double best_amp = -1.0;
    for (int p = candidates.min_period; p <= candidates.max_period; ++p) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            acc += x[t] * std::polar(1.0, -kTwoPi * static_cast<double>(t) / p);
        }
        const double amp = std::abs(acc);
        if (amp > best_amp) {
            best_amp = amp;
            best_period = p;
        }
    }
    if (!(best_amp >= 3.0 * median) || best_amp == 0.0) return std::nullopt;
    return best_period;
}

HarmonicFit fit_harmonics(std::span<const double> times, std::span<const double> values,
                          int order, double period) {
    if (order < 1) throw std::invalid_argument("fit_harmonics: order must be >= 1");
    if (!(period > 0.0)) throw std::invalid_argument("fit_harmonics: period must be positive");
    if (times.size() != values.size()) {
        throw std::invalid_argument("fit_harmonics: times and values differ in length");
    }
    const auto cols = static_cast<std::size_t>(2 * order + 1);
    if (values.size() <= cols) {
        throw linalg::RankDeficientError("fit_harmonics: " + std::to_string(values.size()) +
                                         " points cannot determine order " +
                                         std::to_string(order) + " (need more than " +
                                         std::to_string(cols) + ")");
    }
    std::vector<double> design(values.size() * cols);
    for (std::size_t i = 0; i < values.size(); ++i) {
        double* row = design.data() + i * cols;
        row[0] = 1.0;
        for (int k = 1; k <= order; ++k) {
            const double arg = kTwoPi * k * times[i] / period;
            row[2 * k - 1] = std::cos(arg);
            row[2 * k] = std::sin(arg);
        }
    }
    const auto fit = linalg::least_squares(design, cols, values);
    HarmonicFit h;
    h.period = period;
    h.mean_level = fit.coefficients[0];
    for (int k = 1; k <= order; ++k) {
        h.cos_coeffs.push_back(fit.coefficients[static_cast<std::size_t>(2 * k - 1)]);
        h.sin_coeffs.push_back(fit.coefficients[static_cast<std::size_t>(2 * k)]);
    }
    return h;
}

HarmonicFit fit_harmonics(std::span<const double> values, int order, double period) {
    std::vector<double> t(values.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
    return fit_harmonics(t, values, order, period);
}

DecompositionResult decompose(const DailySeries& series, int window) {
    DecompositionResult r;
    r.start = series.start;
    r.trend = moving_average(series.values, window);

    DailySeries detrended{series.start, std::vector<double>(series.size())};
    for (std::size_t i = 0; i < series.size(); ++i) {
        detrended.values[i] = series.values[i] - r.trend[i];
    }
    r.seasonal_profile = weekday_profile(detrended);
    r.deseasonalized = deseasonalize(series, r.seasonal_profile);
    r.residual = difference(r.deseasonalized);
    return r;
}

void write_decomposition_csv(std::ostream& out, const DecompositionResult& result) {
    out << "t,trend,seasonal,residual\n";
    for (std::size_t i = 0; i < result.trend.size(); ++i) {
        out << i << ',' << format_price(result.trend[i]) << ','
            << format_price(result.seasonal_at(i)) << ',';
        if (i > 0) out << format_price(result.residual[i - 1]);
        out << '\n';
    }
}

}  // namespace spotcast::seasonal
