#include "spotcast/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace spotcast::optim {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

class Counter {
public:
    Counter(const Objective& f, std::size_t budget) : f_(f), budget_(budget) {}
    double operator()(std::span<const double> x) {
        ++count_;
        const double v = f_(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }
    [[nodiscard]] bool exhausted() const noexcept { return count_ >= budget_; }
    [[nodiscard]] std::size_t count() const noexcept { return count_; }

private:
    const Objective& f_;
    std::size_t budget_;
    std::size_t count_ = 0;
};

// One Nelder-Mead run from an axis-aligned simplex. Returns true on convergence.
bool run(Counter& eval, Vertex& best, std::span<const double> steps,
         const NelderMeadOptions& opt) {
    const std::size_t n = best.x.size();
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back(best);
    for (std::size_t i = 0; i < n; ++i) {
        Vertex v{best.x, 0.0};
        v.x[i] += steps[i];
        v.f = eval(v.x);
        simplex.push_back(std::move(v));
    }

    std::vector<double> centroid(n), trial(n), trial2(n);
    auto point_along = [&](double t, std::vector<double>& out) {
        const auto& worst = simplex.back().x;
        for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (centroid[j] - worst[j]);
    };

    while (true) {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const double f_best = simplex.front().f;
        const double f_worst = simplex.back().f;
        double spread_x = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                spread_x = std::max(spread_x, std::abs(simplex[i].x[j] - simplex[0].x[j]));
            }
        }
        const bool f_flat = std::isfinite(f_worst) &&
                            f_worst - f_best <= opt.f_abs_tolerance +
                                                    opt.f_rel_tolerance * std::abs(f_best);
        if (f_flat && spread_x <= opt.x_tolerance) {
            best = simplex.front();
            return true;
        }
        if (eval.exhausted()) {
            best = simplex.front();
            return false;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        point_along(1.0, trial);
        const double f_reflect = eval(trial);
        if (f_reflect < simplex[0].f) {
            point_along(2.0, trial2);
            const double f_expand = eval(trial2);
            if (f_expand < f_reflect) {
                simplex.back() = {trial2, f_expand};
            } else {
                simplex.back() = {trial, f_reflect};
            }
            continue;
        }
        if (f_reflect < simplex[n - 1].f) {
            simplex.back() = {trial, f_reflect};
            continue;
        }
        const bool outside = f_reflect < simplex.back().f;
        point_along(outside ? 0.5 : -0.5, trial2);
        const double f_contract = eval(trial2);
        if (f_contract < (outside ? f_reflect : simplex.back().f)) {
            simplex.back() = {trial2, f_contract};
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                simplex[i].x[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
            }
            simplex[i].f = eval(simplex[i].x);
        }
    }
}

}  // namespace

OptimResult nelder_mead(const Objective& f, std::vector<double> x0,
                        std::span<const double> steps, const NelderMeadOptions& options) {
    if (x0.empty() || steps.size() != x0.size()) {
        throw std::invalid_argument("nelder_mead: steps must match the dimension of x0");
    }
    Counter eval(f, options.max_evaluations);
    Vertex best{std::move(x0), 0.0};
    best.f = eval(best.x);

    bool converged = run(eval, best, steps, options);
    for (int r = 0; r < options.restarts && converged && !eval.exhausted(); ++r) {
        const double before = best.f;
        converged = run(eval, best, steps, options);
        if (before - best.f <= options.f_abs_tolerance + options.f_rel_tolerance * std::abs(before)) {
            break;
        }
    }
    return {std::move(best.x), best.f, eval.count(), converged};
}

}  // namespace spotcast::optim
