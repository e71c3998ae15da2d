#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spotcast::optim {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    std::size_t max_evaluations = 20000;
    /// Stop when the simplex spread in f falls under abs_tol + rel_tol * |f_best| ...
    double f_abs_tolerance = 1e-10;
    double f_rel_tolerance = 1e-12;
    /// ... and every vertex lies within x_tolerance of the best (max-norm).
    double x_tolerance = 1e-8;
    /// Re-initialize the simplex at the optimum this many times; stops early when a
    /// restart no longer improves f.
    int restarts = 2;
};

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/**
 * Derivative-free Nelder-Mead minimization.
 *
 * The initial simplex is x0 plus steps[i] along each axis. Non-finite
 * objective values are treated as +infinity, so infeasible regions can be
 * signalled by returning NaN.
 */
[[nodiscard]] OptimResult nelder_mead(const Objective& f, std::vector<double> x0,
                                      std::span<const double> steps,
                                      const NelderMeadOptions& options = {});

}  // namespace spotcast::optim
