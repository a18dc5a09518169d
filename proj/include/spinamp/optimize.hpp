#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <utility>

namespace spinamp {

/// Golden-section maximization of f on [a, b]; returns (x*, f(x*)).
inline std::pair<double, double> golden_section_max(const std::function<double(double)>& f,
                                                    double a, double b, double xtol = 1e-10) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol * (1.0 + std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

struct SampledPeak {
    double x = 0.0;
    double value = 0.0;
    std::size_t index = 0;  // argmax sample
    bool interior = false;  // false when the maximum sits on a grid boundary
};

/// Locate the maximum of sampled data and refine it by the parabola through the
/// three samples around the argmax. Ties resolve to the earliest sample.
inline SampledPeak refine_sampled_peak(std::span<const double> x, std::span<const double> y) {
    SampledPeak p;
    std::size_t im = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[im]) im = i;
    p.index = im;
    p.x = x[im];
    p.value = y[im];
    if (im == 0 || im + 1 >= y.size()) return p;
    p.interior = true;
    // Newton form through the three points around the argmax.
    double x0 = x[im - 1], x1 = x[im], x2 = x[im + 1];
    double y0 = y[im - 1], y1 = y[im], y2 = y[im + 1];
    double d1 = (y1 - y0) / (x1 - x0), d2 = (y2 - y1) / (x2 - x1);
    double dd = (d2 - d1) / (x2 - x0);
    if (dd >= 0.0) return p; // flat or non-concave: keep the grid sample
    double xv = 0.5 * (x0 + x1) - 0.5 * d1 / dd;
    if (xv > x0 && xv < x2) {
        p.x = xv;
        p.value = y0 + d1 * (xv - x0) + dd * (xv - x0) * (xv - x1);
    }
    return p;
}

/// First strict local maximum in sampled data after the initial point, refined
/// parabolically; falls back to the global sampled peak when no interior local
/// maximum exists.
inline SampledPeak first_local_peak(std::span<const double> x, std::span<const double> y) {
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (y[i] > y[i - 1] && y[i] >= y[i + 1]) {
            std::size_t lo = i - 1, hi = i + 1;
            SampledPeak p = refine_sampled_peak(x.subspan(lo, 3), y.subspan(lo, 3));
            p.index = i;
            p.interior = true;
            return p;
        }
    }
    return refine_sampled_peak(x, y);
}

} // namespace spinamp
