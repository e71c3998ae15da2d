#include "spotcast/lstsq.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace spotcast::linalg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

LeastSquaresFit least_squares(std::span<const double> design, std::size_t cols,
                              std::span<const double> y) {
    if (cols == 0 || design.size() != y.size() * cols) {
        throw std::invalid_argument("least_squares: design shape does not match response");
    }
    const auto rows = static_cast<Eigen::Index>(y.size());
    if (rows < static_cast<Eigen::Index>(cols)) {
        throw RankDeficientError("least_squares: " + std::to_string(rows) +
                                 " observations for " + std::to_string(cols) + " unknowns");
    }
    const Eigen::Map<const RowMatrix> x(design.data(), rows, static_cast<Eigen::Index>(cols));
    const Eigen::Map<const Eigen::VectorXd> rhs(y.data(), rows);

    Eigen::ColPivHouseholderQR<RowMatrix> qr(x);
    if (qr.rank() < static_cast<Eigen::Index>(cols)) {
        throw RankDeficientError("least_squares: design matrix has rank " +
                                 std::to_string(qr.rank()) + " < " + std::to_string(cols));
    }
    const Eigen::VectorXd beta = qr.solve(rhs);
    LeastSquaresFit fit;
    fit.coefficients.assign(beta.data(), beta.data() + beta.size());
    fit.residual_sum_of_squares = (x * beta - rhs).squaredNorm();
    return fit;
}

std::vector<double> solve_spd(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<Eigen::Index>(b.size());
    if (a.size() != b.size() * b.size()) throw std::invalid_argument("solve_spd: shape mismatch");
    const Eigen::Map<const RowMatrix> m(a.data(), n, n);
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw RankDeficientError("solve_spd: matrix is not positive definite");
    }
    // Reject near-singular systems: the smallest pivot relative to the largest.
    const Eigen::VectorXd diag = llt.matrixL().toDenseMatrix().diagonal();
    if (n > 0 && diag.minCoeff() <= 1e-7 * diag.maxCoeff()) {
        throw RankDeficientError("solve_spd: matrix is numerically singular");
    }
    const Eigen::VectorXd x = llt.solve(rhs);
    return {x.data(), x.data() + x.size()};
}

}  // namespace spotcast::linalg
