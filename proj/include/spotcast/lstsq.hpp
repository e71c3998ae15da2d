#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace spotcast::linalg {

class RankDeficientError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct LeastSquaresFit {
    std::vector<double> coefficients;
    double residual_sum_of_squares = 0.0;
};

/// Minimizes ||X b - y||^2 for a row-major design X with `cols` columns.
/// Throws RankDeficientError when X lacks full column rank.
[[nodiscard]] LeastSquaresFit least_squares(std::span<const double> design, std::size_t cols,
                                            std::span<const double> y);

/// Solves A x = b for symmetric positive definite A (row-major n x n).
/// Throws RankDeficientError when A is not numerically positive definite.
[[nodiscard]] std::vector<double> solve_spd(std::span<const double> a, std::span<const double> b);

}  // namespace spotcast::linalg
