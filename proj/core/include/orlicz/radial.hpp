#pragma once

#include <cstdint>
#include <vector>

#include "orlicz/nfunction.hpp"
#include "orlicz/vec.hpp"

namespace orlicz {

// Piecewise-linear convex nondecreasing profile A(r) on [0, r_max] with
// A(0) = 0; the numerical stand-in for the greatest convex radial minorant.
struct RadialProfile {
    std::vector<double> knots;   // increasing, knots[0] == 0
    std::vector<double> values;  // convex nondecreasing, values[0] == 0

    double r_max() const { return knots.back(); }
    double value_max() const { return values.back(); }

    /// Linear interpolation; throws OutOfRange beyond r_max.
    double eval(double r) const;
};

struct SphereMinConfig {
    int samples_per_dim = 64;   // coarse angular samples = samples_per_dim * d
    int refine_rounds = 20;
    double refine_step = 0.05;  // initial tangent step, radians-scale
    double stab_tol = 1e-10;
    std::uint64_t seed = 7777;

    static SphereMinConfig defaults() { return {}; }
};

/// inf over the sphere |x| = r of phi, by dense angular sampling plus local
/// tangent-descent refinement. Throws SphereMinimizationFailed when the
/// refinement does not settle.
double sphere_infimum(const NFunction& phi, double r,
                      const SphereMinConfig& cfg = SphereMinConfig::defaults());

/// Greatest convex nondecreasing interpolant below the sampled sphere infima
/// on m+1 uniform knots over [0, r_max].
RadialProfile radial_minorant(const NFunction& phi, double r_max, int m,
                              const SphereMinConfig& cfg = SphereMinConfig::defaults());

/// Smallest r with A(r) = v, by bisection on the profile. Throws OutOfRange
/// for v outside [0, A(r_max)].
double radial_minorant_inverse(const RadialProfile& a, double v);

/// Profile sized so that value_max >= value_needed, doubling r_max as needed.
RadialProfile radial_minorant_covering(const NFunction& phi, double value_needed, int m,
                                       const SphereMinConfig& cfg = SphereMinConfig::defaults());

} // namespace orlicz
