#include "spinamp/ode.hpp"

#include <algorithm>
#include <cmath>

#include "spinamp/errors.hpp"

namespace spinamp {

namespace {

// Dormand-Prince 5(4) tableau (FSAL).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// y5 - y4 error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

class Stepper {
public:
    Stepper(const OdeRhs& f, Eigen::Index n, const OdeOptions& opts) : f_(f), opts_(opts) {
        for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_}) k->resize(n);
        ytmp_.resize(n);
        yerr_.resize(n);
    }

    // First derivative must be primed by the caller via prime().
    void prime(double t, const Eigen::VectorXd& y) { f_(t, y, k1_); }
    const Eigen::VectorXd& f_begin() const { return k1_; }

    double initial_step(double t, const Eigen::VectorXd& y, double t_end) const {
        // Conservative Hairer-style guess from the first derivative scale.
        double d0 = weighted_norm(y, y);
        double d1 = weighted_norm(k1_, y);
        double h = (d0 < 1e-10 || d1 < 1e-10) ? 1e-6 : 0.01 * d0 / d1;
        return std::min({h, std::abs(t_end - t), opts_.h_max});
    }

    // Attempt one step of size h from (t, y). On acceptance y and k1 are
    // advanced (FSAL) and the actual h used is returned through h_did.
    bool try_step(double& t, Eigen::VectorXd& y, double h, double& err_out) {
        const double t0 = t;
        f2_eval(t0, y, h);
        ytmp_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        f_(t0 + h, ytmp_, k7_);
        yerr_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
        double err = weighted_norm(yerr_, ytmp_);
        err_out = err;
        if (err <= 1.0) {
            t = t0 + h;
            y.swap(ytmp_);
            k1_.swap(k7_); // FSAL
            return true;
        }
        return false;
    }

    double weighted_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& yscale) const {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            double sc = opts_.atol + opts_.rtol * std::abs(yscale[i]);
            double q = v[i] / sc;
            acc += q * q;
        }
        return std::sqrt(acc / static_cast<double>(v.size()));
    }

private:
    void f2_eval(double t, const Eigen::VectorXd& y, double h) {
        ytmp_ = y + h * a21 * k1_;
        f_(t + c2 * h, ytmp_, k2_);
        ytmp_ = y + h * (a31 * k1_ + a32 * k2_);
        f_(t + c3 * h, ytmp_, k3_);
        ytmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        f_(t + c4 * h, ytmp_, k4_);
        ytmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        f_(t + c5 * h, ytmp_, k5_);
        ytmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        f_(t + h, ytmp_, k6_);
    }

    const OdeRhs& f_;
    const OdeOptions& opts_;
    Eigen::VectorXd k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, yerr_;
};

double next_step_size(double h, double err) {
    constexpr double safety = 0.9, min_shrink = 0.2, max_grow = 5.0;
    double factor = (err <= 1e-30) ? max_grow : safety * std::pow(err, -0.2);
    return h * std::clamp(factor, min_shrink, max_grow);
}

template <typename OnStep>
void drive(const OdeRhs& f, Eigen::VectorXd& y, double t0, double t1, const OdeOptions& opts,
           const std::function<double(double)>& next_stop, OnStep&& on_step) {
    Stepper st(f, y.size(), opts);
    double t = t0;
    st.prime(t, y);
    on_step(t, y, st.f_begin());
    double h = opts.h_init > 0 ? opts.h_init : st.initial_step(t, y, t1);
    long steps = 0;
    double last_err = 0.0;
    while (t < t1) {
        if (++steps > opts.max_steps)
            throw IntegrationError("ODE step limit exceeded", last_err);
        double stop = next_stop(t);
        double h_try = std::min({h, opts.h_max, stop - t});
        if (h_try <= std::abs(t) * 1e-15 + 1e-300)
            throw IntegrationError("ODE step size underflow", last_err);
        double err = 0.0;
        if (st.try_step(t, y, h_try, err)) {
            on_step(t, y, st.f_begin());
            // Do not let a grid-clipped step shrink the controller estimate.
            double h_next = next_step_size(h_try, err);
            h = std::max(h_next, (h_try < h) ? h : h_next);
        } else {
            h = next_step_size(h_try, err);
        }
        last_err = err;
    }
}

} // namespace

void integrate_grid(const OdeRhs& f, Eigen::VectorXd& y, std::span<const double> grid,
                    const OdeOptions& opts,
                    const std::function<void(std::size_t, double, const Eigen::VectorXd&)>& on_sample) {
    if (grid.size() < 2) throw DomainError("time grid needs at least two points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw DomainError("time grid must be strictly increasing");

    std::size_t next = 0;
    auto next_stop = [&](double) { return grid[std::min(next, grid.size() - 1)]; };
    auto on_step = [&](double t, const Eigen::VectorXd& yc, const Eigen::VectorXd&) {
        while (next < grid.size() && t >= grid[next] - 1e-14 * std::max(1.0, std::abs(grid[next]))) {
            on_sample(next, grid[next], yc);
            ++next;
        }
    };
    drive(f, y, grid.front(), grid.back(), opts, next_stop, on_step);
    if (next < grid.size()) { // final point landed within rounding of t1
        on_sample(next, grid.back(), y);
        ++next;
    }
}

DenseSolution integrate_dense(const OdeRhs& f, Eigen::VectorXd y0, double t0, double t1,
                              const OdeOptions& opts) {
    DenseSolution sol;
    auto next_stop = [&](double) { return t1; };
    auto on_step = [&](double t, const Eigen::VectorXd& y, const Eigen::VectorXd& fy) {
        sol.t.push_back(t);
        sol.y.push_back(y);
        sol.f.push_back(fy);
    };
    drive(f, y0, t0, t1, opts, next_stop, on_step);
    return sol;
}

std::size_t DenseSolution::segment(double s) const {
    auto it = std::upper_bound(t.begin(), t.end(), s);
    std::size_t k = static_cast<std::size_t>(std::distance(t.begin(), it));
    if (k == 0) return 0;
    if (k >= t.size()) return t.size() - 2;
    return k - 1;
}

Eigen::VectorXd DenseSolution::eval(double s) const {
    std::size_t k = segment(s);
    double h = t[k + 1] - t[k];
    double u = (s - t[k]) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * y[k] + (h10 * h) * f[k] + h01 * y[k + 1] + (h11 * h) * f[k + 1];
}

double DenseSolution::eval_component(double s, Eigen::Index i) const {
    std::size_t k = segment(s);
    double h = t[k + 1] - t[k];
    double u = (s - t[k]) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * y[k][i] + h10 * h * f[k][i] + h01 * y[k + 1][i] + h11 * h * f[k + 1][i];
}

} // namespace spinamp
