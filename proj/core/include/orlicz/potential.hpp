#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/conjugate.hpp"
#include "orlicz/nfunction.hpp"
#include "orlicz/trajectory.hpp"
#include "orlicz/trig.hpp"
#include "orlicz/vec.hpp"

namespace orlicz {

// Scalar function of time: polynomial coefficients or a 1-d trig polynomial.
struct TimeFunction {
    std::vector<double> poly;         // c0 + c1 t + c2 t^2 + ...
    std::optional<TrigPoly> trig;     // used when poly is empty

    double eval(double t) const;
    bool valid() const { return !poly.empty() || trig.has_value(); }

    static TimeFunction constant(double c) { return TimeFunction{{c}, std::nullopt}; }
};

// Multivariate polynomial sum of c * prod x_k^{e_k}.
struct Polynomial {
    struct Term {
        double coeff = 0.0;
        std::vector<int> powers;
    };
    int dim = 0;
    std::vector<Term> terms;

    double eval(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    int degree() const;
};

enum class PotentialKind { Separable, QuadraticForcing, Manufactured, Custom };

std::string to_string(PotentialKind k);

// (H)-style gradient-splitting data for the (p1,p2) case.
struct SplitGrowthData {
    double p1 = 2.0, p2 = 2.0;
    int d1 = 1, d2 = 1;
    double alpha1 = 0.0, alpha2 = 0.0, beta1 = 0.0, beta2 = 0.0;
    std::function<double(double)> f1, f2, g1, g2, h1, h2;  // nonnegative, in L^1
};

struct HypothesisData {
    std::function<double(const Vec&)> a;    // continuous envelope in x
    std::function<double(double)> b;        // nonnegative L^1 weight in t
    std::function<double(double)> dfun;     // sublinearity weight, >= 1
    std::optional<NFunction> phi0;          // comparison function for (B)
    std::optional<SplitGrowthData> split;   // condition (H) inputs
    double recipe_c = 0.0;                  // constant chosen by the (B) recipe
};

// Time-dependent potential F(t,x) with gradient in x, plus whatever
// hypothesis data its constructor could derive.
struct Potential {
    int dim = 0;
    double period = 1.0;
    PotentialKind kind = PotentialKind::Custom;

    std::function<double(double, const Vec&)> value_fn;
    std::function<Vec(double, const Vec&)> grad_fn;  // empty -> central differences

    HypothesisData hyp;

    // constructor parameters, for serialization
    TimeFunction p_of_t;            // separable factor P(t)
    Polynomial q_of_x;              // separable factor Q(x)
    std::optional<TrigPoly> forcing;          // quadratic-plus-forcing f(t)
    std::optional<TrigPoly> exact_solution;   // manufactured u*(t)

    double operator()(double t, const Vec& x) const { return value_fn(t, x); }
    Vec gradient(double t, const Vec& x) const;

    /// (1/T) integral of F(t,x) dt by the rectangle rule on t_samples nodes.
    double time_mean(const Vec& x, int t_samples = 256) const;
};

/// F(t,x) = P(t) Q(x). Fills condition-(A) data a = |Q|+|grad Q|+1, b = |P|+1.
Potential make_separable(TimeFunction p, Polynomial q, double period);

/// F(t,x) = |x|^2/2 + f(t).x with a trig forcing; linear-gradient kind.
Potential make_quadratic_forcing(const TrigPoly& forcing, double period);

struct ManufacturedConfig {
    int fine_grid = 2048;        // sampling for the spectral cross-check
    double smooth_tol = 5e-2;    // relative mismatch triggering the error
    static ManufacturedConfig defaults() { return {}; }
};

/// Potential whose Euler-Lagrange flow has the given path as an exact
/// solution: F(t,x) = |x - u*(t)|^2/2 + g(t).x with g = d/dt grad phi(u*').
/// Throws DifferentiationUnstable when the flux derivative fails its
/// spectral smoothness check.
Potential make_manufactured(const NFunction& phi, const Trajectory& ustar,
                            const ManufacturedConfig& cfg = ManufacturedConfig::defaults());

Potential make_custom_potential(int dim, double period,
                                std::function<double(double, const Vec&)> value,
                                std::function<Vec(double, const Vec&)> grad = nullptr);

// ---------------------------------------------------------------------------
// Hypothesis checks

struct HypGridConfig {
    int t_samples = 96;
    int x_radii = 12;
    double x_radius = 10.0;
    int x_directions = 12;
    int y_radii = 10;
    double y_radius = 3.0;
    double tol = 1e-7;
    std::uint64_t seed = 31415;

    static HypGridConfig defaults() { return {}; }
};

struct ConditionVerdict {
    bool holds = false;
    double max_ratio = 0.0;      // worst lhs/rhs (or slack, per check)
    double t_witness = 0.0;
    Vec x_witness;
    std::string detail;
};

/// |F| + |grad F| <= a(x) b(t) on the sample grid.
ConditionVerdict check_condition_A(const Potential& f,
                                   const HypGridConfig& cfg = HypGridConfig::defaults());

/// phi*(grad F / d(t)) <= phi0(x) + 1 with precondition phi0 strictly below
/// phi in the every-k ordering; throws OrderingViolation when that fails.
ConditionVerdict check_condition_B(const Potential& f, const NFunction& phi,
                                   const NFunction& phi0,
                                   const std::function<double(double)>& dfun,
                                   const HypGridConfig& cfg = HypGridConfig::defaults(),
                                   bool check_ordering = true);

struct ConditionBRecipe {
    NFunction phi0;
    std::function<double(double)> dfun;
    double c = 1.0;
    double q = 1.5;
    bool found = false;
};

/// Auto-selected (phi0, d(t)) for built-in potential kinds: power-law phi0
/// with growth tied to the potential, d(t) = C max(1, |base(t)|), C doubled
/// until the sampled display holds.
ConditionBRecipe condition_b_recipe(const Potential& f, const NFunction& phi,
                                    const HypGridConfig& cfg = HypGridConfig::defaults());

/// Split gradient bounds with the half-open exponent windows.
ConditionVerdict check_condition_H(const Potential& f,
                                   const HypGridConfig& cfg = HypGridConfig::defaults());

enum class CoercivityVerdict { Holds, Fails, Inconclusive };

struct CoercivityReport {
    CoercivityVerdict verdict = CoercivityVerdict::Inconclusive;
    std::vector<double> radii;
    std::vector<double> worst_ratio;   // min over directions per radius
    Vec worst_direction;
};

struct CoercivityConfig {
    std::vector<double> radii;     // default 1..1e3, three decades
    int directions = 8;
    int t_samples = 128;
    double growth_factor = 2.0;
    double bounded_factor = 1.2;
    std::uint64_t seed = 2718;

    static CoercivityConfig defaults();
};

/// Ratio curve r -> integral F(t, r e) dt / phi0(2 r e); holds when it keeps
/// growing over the last decade in every sampled direction.
CoercivityReport check_coercivity_F(const Potential& f, const NFunction& phi0,
                                    const CoercivityConfig& cfg = CoercivityConfig::defaults());

struct StructureReport {
    bool condition_holds = false;
    bool remark_bound_holds = false;   // phi*(grad phi(y)) <= L/(1-L) phi(y/L)
    double max_violation = 0.0;
    std::string detail;
};

/// Lagrangian structure bound |L| + |grad_x L| + phi*(grad_y L / lambda)
/// <= a(x)[b(t) + phi(y/Lambda)] for L = phi(y) + F(t,x).
StructureReport check_condition_S(const NFunction& phi, const Potential& f, double Lambda,
                                  double lambda,
                                  const HypGridConfig& cfg = HypGridConfig::defaults());

} // namespace orlicz
