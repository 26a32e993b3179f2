#pragma once

// Independent oracles for expected-value tests: brute-force conjugation,
// 1-d golden-section maximization, high-resolution quadrature, and central
// finite differences. These stay clear of the library's own solution paths.

#include <cmath>
#include <functional>
#include <vector>

#include "orlicz/nfunction.hpp"
#include "orlicz/vec.hpp"

namespace oracles {

// sup over a dense 1-d grid of y*z - phi(y)
inline double brute_conjugate_1d(const orlicz::NFunction& phi, double z, double radius,
                                 double step) {
    double best = -1e300;
    for (double y = -radius; y <= radius; y += step) {
        const double v = y * z - phi({y});
        if (v > best) best = v;
    }
    return best;
}

inline double golden_max(const std::function<double(double)>& f, double lo, double hi,
                         int iters = 200) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

// composite midpoint quadrature on [0, T]
inline double quad_midpoint(const std::function<double(double)>& f, double period, int n) {
    double s = 0.0;
    const double h = period / n;
    for (int i = 0; i < n; ++i) s += f((i + 0.5) * h);
    return s * h;
}

// central differences of a scalar function of many variables
inline std::vector<double> central_gradient(const std::function<double(const std::vector<double>&)>& f,
                                            std::vector<double> x, double h_scale = 0.0) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h =
            h_scale > 0.0 ? h_scale : std::cbrt(2.2e-16) * std::max(1.0, std::abs(x[i]));
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

} // namespace oracles
