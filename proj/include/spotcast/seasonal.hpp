#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spotcast/series.hpp"

namespace spotcast::seasonal {

/// Mean level per weekday; index 0 is Monday, 6 is Sunday.
using WeekdayProfile = std::array<double, 7>;

/// Additive split X_t = T_t + S_t + e_t of a daily series.
struct DecompositionResult {
    DayStamp start = 0;
    /// Centered moving average of the input.
    std::vector<double> trend;
    WeekdayProfile seasonal_profile{};
    /// First differences of the deseasonalized series; one shorter than the input.
    std::vector<double> residual;
    /// Deseasonalized series X_t - S_t, kept so residual forecasts can be integrated back.
    std::vector<double> deseasonalized;
    int period = 7;

    [[nodiscard]] double seasonal_at(std::size_t i) const;
};

struct HarmonicFit {
    double mean_level = 0.0;
    std::vector<double> cos_coeffs;  ///< a_1..a_K
    std::vector<double> sin_coeffs;  ///< b_1..b_K
    double period = 1.0;

    [[nodiscard]] int order() const noexcept { return static_cast<int>(cos_coeffs.size()); }
    [[nodiscard]] double evaluate(double t) const;
};

enum class Significance { OnePercent, FivePercent, TenPercent };

struct StationarityVerdict {
    double statistic = 0.0;
    double critical_value = 0.0;
    bool reject_unit_root = false;
};

/// Centered moving average; at the edges the window shrinks to the valid range.
[[nodiscard]] std::vector<double> moving_average(std::span<const double> values, int window);

/// Mean of all values per weekday. Needs at least two full weeks.
[[nodiscard]] WeekdayProfile weekday_profile(const DailySeries& series);

/// values[i] minus the profile entry of day first_day + i.
[[nodiscard]] std::vector<double> deseasonalize(std::span<const double> values, DayStamp first_day,
                                                const WeekdayProfile& profile);
[[nodiscard]] std::vector<double> deseasonalize(const DailySeries& series,
                                                const WeekdayProfile& profile);
/// Inverse of deseasonalize.
[[nodiscard]] std::vector<double> reseasonalize(std::span<const double> values, DayStamp first_day,
                                                const WeekdayProfile& profile);

/// out[i] = in[i+1] - in[i]
[[nodiscard]] std::vector<double> difference(std::span<const double> values);

/// Non-augmented Dickey-Fuller test with intercept: regress dx_t on (1, x_{t-1}).
[[nodiscard]] StationarityVerdict dickey_fuller(std::span<const double> values,
                                                Significance significance = Significance::FivePercent);

/// Critical values of the constant-only Dickey-Fuller distribution.
[[nodiscard]] double dickey_fuller_critical_value(Significance significance) noexcept;

struct PeriodRange {
    int min_period = 2;
    int max_period = 60;
};

/**
 * Candidate period with the largest DFT amplitude, or nullopt when that
 * amplitude is below 3x the median magnitude of the full one-sided spectrum.
 * The mean is removed first.
 */
[[nodiscard]] std::optional<int> dominant_period(std::span<const double> values,
                                                 PeriodRange candidates);

/// Linear least-squares harmonic fit with fixed fundamental 2*pi/period at sample times t.
[[nodiscard]] HarmonicFit fit_harmonics(std::span<const double> times,
                                        std::span<const double> values, int order, double period);
/// As above with times 0, 1, ..., n-1.
[[nodiscard]] HarmonicFit fit_harmonics(std::span<const double> values, int order, double period);

/// moving average -> weekday profile of the detrended series -> deseasonalize -> difference.
[[nodiscard]] DecompositionResult decompose(const DailySeries& series, int window = 7);

/// Columns `t,trend,seasonal,residual`; residual is empty on the first row.
void write_decomposition_csv(std::ostream& out, const DecompositionResult& result);

}  // namespace spotcast::seasonal
