#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace spinamp {

// Adaptive Dormand-Prince 5(4) integrator. The embedded pair drives step-size
// control; output samples are produced by clipping steps to the requested grid
// times, so sampled states carry no interpolation error. A stored-step dense
// form with cubic Hermite evaluation is available for peak refinement.

struct OdeOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h_init = 0.0; // 0 = choose automatically
    double h_max = std::numeric_limits<double>::infinity();
    long max_steps = 4000000;
};

using OdeRhs = std::function<void(double, const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Integrate y' = f(t, y) across `grid` (strictly increasing, grid[0] is t0).
/// `on_sample(i, t, y)` fires at every grid point, including the initial one.
void integrate_grid(const OdeRhs& f, Eigen::VectorXd& y, std::span<const double> grid,
                    const OdeOptions& opts,
                    const std::function<void(std::size_t, double, const Eigen::VectorXd&)>& on_sample);

/// Stored accepted steps (t_k, y_k, f_k) of an integration run.
struct DenseSolution {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> y;
    std::vector<Eigen::VectorXd> f;

    /// Cubic Hermite interpolation of the full state at time `s`.
    Eigen::VectorXd eval(double s) const;
    /// Same, single component.
    double eval_component(double s, Eigen::Index i) const;
    double t_begin() const { return t.front(); }
    double t_end() const { return t.back(); }

private:
    std::size_t segment(double s) const;
};

DenseSolution integrate_dense(const OdeRhs& f, Eigen::VectorXd y0, double t0, double t1,
                              const OdeOptions& opts);

} // namespace spinamp
