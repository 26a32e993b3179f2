#pragma once

#include <cstddef>
#include <vector>

#include "orlicz/vec.hpp"

namespace orlicz {

// Real trigonometric polynomial on [0,T), one set of coefficients per
// output dimension:
//   f_k(t) = a0[k]/2 + sum_j a[k][j] cos(2*pi*(j+1) t/T) + b[k][j] sin(...)
struct TrigPoly {
    double period = 1.0;
    std::vector<double> a0;               // dim entries
    std::vector<std::vector<double>> a;   // dim x K
    std::vector<std::vector<double>> b;   // dim x K

    std::size_t dim() const { return a0.size(); }
    std::size_t harmonics() const { return a.empty() ? 0 : a[0].size(); }

    Vec eval(double t) const;
    Vec derivative(double t) const;
    Vec second_derivative(double t) const;

    /// Coefficients of f', same harmonic count.
    TrigPoly differentiated() const;

    /// Least-wasteful interpolant of uniform periodic samples (N x dim,
    /// row-major), exact for band-limited data with K <= N/2 harmonics.
    static TrigPoly from_samples(const std::vector<double>& samples, std::size_t n,
                                 std::size_t dim, double period);

    /// Fraction of coefficient energy carried by the top quarter of the
    /// harmonic range; a smoothness diagnostic for sampled data.
    double tail_energy_fraction() const;
};

} // namespace orlicz
