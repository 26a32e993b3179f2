#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orlicz/conjugate.hpp"
#include "orlicz/nfunction.hpp"
#include "orlicz/radial.hpp"
#include "orlicz/trajectory.hpp"

namespace orlicz {

struct ModularValue {
    double value = 0.0;
    bool overflowed = false;
};

/// Rectangle-rule modular (T/N) sum phi(u_i); flags float-range overflow.
ModularValue modular(const NFunction& phi, const Trajectory& u);

struct LuxemburgConfig {
    double rel_tol = 1e-9;
    int max_iter = 200;
    int max_doublings = 1000;

    static LuxemburgConfig defaults() { return {}; }
};

/// Smallest lambda with modular(u/lambda) <= 1, by bracketing bisection.
/// Returns 0 for the zero path; throws BracketFailure on non-finite data.
double luxemburg_norm(const NFunction& phi, const Trajectory& u,
                      const LuxemburgConfig& cfg = LuxemburgConfig::defaults());

/// ||u|| <= modular(u) + 1; must hold for every path.
bool amemiya_check(const NFunction& phi, const Trajectory& u,
                   const LuxemburgConfig& cfg = LuxemburgConfig::defaults());

/// Generalized Hoelder bound: integral of u.v <= 2 ||u||_phi ||v||_phi*.
bool holder_check(const NFunction& phi, const Trajectory& u, const Trajectory& v,
                  const ConjugateConfig& ccfg = ConjugateConfig::defaults(),
                  const LuxemburgConfig& lcfg = LuxemburgConfig::defaults());

struct InequalityConfig {
    int profile_knots = 128;
    std::size_t morrey_all_pairs_max = 128;  // grid size up to which all pairs run
    int morrey_random_pairs = 10000;
    double tol = 1e-8;
    std::uint64_t seed = 5150;

    static InequalityConfig defaults() { return {}; }
};

struct SlackResult {
    double min_slack = 0.0;  // rhs - lhs, worst case over samples
    bool pass = false;
};

struct InequalityReport {
    SlackResult morrey;
    SlackResult sobolev;
    SlackResult pw;
    SlackResult aniso_pw;

    bool all_pass() const {
        return morrey.pass && sobolev.pass && pw.pass && aniso_pw.pass;
    }
};

/// The four trajectory embedding bounds (pointwise continuity modulus,
/// sup-norm, mean-free sup-norm, modular mean-free bound) evaluated on the
/// grid. Slack minima must clear -tol.
InequalityReport inequality_suite(const NFunction& phi, const Trajectory& u,
                                  const InequalityConfig& cfg = InequalityConfig::defaults());

/// Same, with a caller-supplied radial profile (amortizes sweeps). The
/// profile must cover values up to max(N/T, 1/T).
InequalityReport inequality_suite(const NFunction& phi, const Trajectory& u,
                                  const RadialProfile& profile,
                                  const InequalityConfig& cfg = InequalityConfig::defaults());

struct DistToBoundedReport {
    std::vector<double> levels;      // truncation heights K, increasing
    std::vector<double> distances;   // Luxemburg distance of Du to its K-clamp
    double min_distance = 0.0;
    double minimizing_level = 0.0;
};

/// Distance of u' to the bounded paths, via radial clamping at each level.
/// On a finite grid the distance reaches 0 at K = max |Du|; the decay curve
/// is the diagnostic.
DistToBoundedReport dist_to_bounded(const NFunction& phi, const Trajectory& u,
                                    std::vector<double> levels = {},
                                    const LuxemburgConfig& cfg = LuxemburgConfig::defaults());

} // namespace orlicz
