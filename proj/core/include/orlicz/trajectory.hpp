#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "orlicz/trig.hpp"
#include "orlicz/vec.hpp"

namespace orlicz {

enum class DerivKind { Nodal, Staggered };

// Uniform periodic grid path on [0,T): node i holds u(t_i), t_i = i T / N.
// Periodicity is structural: node N is node 0.
struct Trajectory {
    double period = 1.0;
    std::size_t n = 0;
    int dim = 0;
    std::vector<double> values;  // n x dim row-major
    DerivKind tag = DerivKind::Nodal;

    double dt() const { return period / static_cast<double>(n); }
    double t(std::size_t i) const { return period * static_cast<double>(i) / static_cast<double>(n); }

    Vec node(std::size_t i) const {
        Vec v(dim);
        for (int k = 0; k < dim; ++k) v[k] = values[i * dim + k];
        return v;
    }
    void set_node(std::size_t i, const Vec& v) {
        for (int k = 0; k < dim; ++k) values[i * dim + k] = v[k];
    }

    bool finite() const { return all_finite(values); }

    static Trajectory zero(double period, std::size_t n, int dim);
    static Trajectory from_function(double period, std::size_t n, int dim,
                                    const std::function<Vec(double)>& f);
    static Trajectory from_trig(const TrigPoly& p, std::size_t n);
};

/// Forward differences (u_{i+1} - u_i) N/T on midpoints; exact for paths
/// affine between nodes.
Trajectory derivative(const Trajectory& u);

/// Quadrature mean and the mean-free remainder.
std::pair<Vec, Trajectory> mean_decompose(const Trajectory& u);

/// Band-limited path with seeded Gaussian harmonic amplitudes (decaying 1/k).
Trajectory random_bandlimited(double period, std::size_t n, int dim, int harmonics,
                              double sigma, std::uint64_t seed);

// CSV round trip, header "t,u1,...,ud", one row per node.
void write_csv(const Trajectory& u, std::ostream& os);
std::string to_csv(const Trajectory& u);
Trajectory read_csv(std::istream& is);
Trajectory trajectory_from_csv_file(const std::string& path);
void trajectory_to_csv_file(const Trajectory& u, const std::string& path);

} // namespace orlicz
