#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "orlicz/nfunction.hpp"
#include "orlicz/vec.hpp"

namespace orlicz {

enum class ConjugateMode { Analytic, Numeric };

struct ConjugateConfig {
    double newton_tol = 1e-11;
    int newton_max_iter = 100;
    int bracket_dirs = 16;             // sphere directions probed when growing the box
    double bracket_cap = 1e305;        // beyond this the sup overflows double range
    int coordinate_sweeps = 200;       // golden-section fallback budget
    bool force_numeric = false;        // ignore registered closed forms
    bool cache_enabled = true;

    static ConjugateConfig defaults() { return {}; }
};

// Complementary function of an N-infinity base: F*(z) = sup_y y.z - F(y),
// together with the maximizer map z -> y*(z). Copies share state; numeric
// evaluations memoize maximizers behind a shared mutex.
class ConjugateFunction {
public:
    double operator()(const Vec& zeta) const { return eval(zeta); }
    double eval(const Vec& zeta) const;
    Vec argmax(const Vec& zeta) const;

    ConjugateMode mode() const;
    int dim() const;
    const NFunction& base() const;

    /// The conjugate viewed as an NFunction; its gradient is the maximizer map.
    NFunction to_nfunction() const;

private:
    friend ConjugateFunction conjugate(const NFunction&, const ConjugateConfig&);
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Builds the complementary function, using registered closed forms for the
/// power/pnorm/aniso/cosh kinds and a damped-Newton maximizer otherwise.
ConjugateFunction conjugate(const NFunction& phi,
                            const ConjugateConfig& cfg = ConjugateConfig::defaults());

/// Young gap phi(x) + phi*(y) - x.y; nonnegative up to tolerance.
double young_gap(const NFunction& phi, const ConjugateFunction& phistar, const Vec& x,
                 const Vec& y);

/// Max relative deviation of x.grad(x) = phi(x) + phi*(grad(x)) over samples.
double check_young_identity(const NFunction& phi, const ConjugateFunction& phistar,
                            int samples = 1000, double radius = 2.0,
                            std::uint64_t seed = 1357);

struct Nabla2Witness {
    double r = 0.0;   // target factor in (0,1)
    double l = 0.0;
    double c = 0.0;
    bool found = false;
};

struct Nabla2Report {
    Delta2Report conjugate_delta2;   // the defining classification
    bool holds = false;
    std::vector<Nabla2Witness> witnesses;  // (l, C') pairs for r = 1/4, 1/2
};

/// Dual growth condition: delta-2 class of the conjugate plus explicit
/// witnesses for phi(x) <= (r/l) phi(l x) + C' on sampled rays.
Nabla2Report check_nabla2(const NFunction& phi,
                          const ConjugateConfig& ccfg = ConjugateConfig::defaults(),
                          const Delta2Config& dcfg = Delta2Config::defaults());

/// Combined growth classification (delta-2, dual class, power envelope).
GrowthReport growth_report(const NFunction& phi,
                           const ConjugateConfig& ccfg = ConjugateConfig::defaults(),
                           const Delta2Config& dcfg = Delta2Config::defaults());

} // namespace orlicz
