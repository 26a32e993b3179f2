#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/vec.hpp"

namespace orlicz {

enum class NKind { Power, PNorm, Aniso, Exponential, Cosh, Composed, Custom };

std::string to_string(NKind k);

// Candidate N-infinity function on R^d: even, convex, zero only at zero,
// superlinear at infinity. Instances are immutable after construction and
// cheap to copy; evaluation is pure.
struct NFunction {
    int dim = 0;
    NKind kind = NKind::Custom;
    bool radial = false;

    std::function<double(const Vec&)> value_fn;
    std::function<Vec(const Vec&)> grad_fn;   // empty -> central differences
    std::function<Mat(const Vec&)> hess_fn;   // empty -> differences of gradient

    // constructor parameters, kept for serialization and analytic conjugation
    double p = 0.0;
    double p1 = 0.0, p2 = 0.0;
    int d1 = 0, d2 = 0;

    struct ComposedPart {
        std::shared_ptr<const NFunction> phi;
        Mat map;  // d_j x d
    };
    std::vector<ComposedPart> parts;

    double operator()(const Vec& y) const { return value_fn(y); }
    Vec gradient(const Vec& y) const;
    Mat hessian(const Vec& y) const;
    bool has_analytic_gradient() const { return static_cast<bool>(grad_fn); }
};

/// |y|^p / p, p > 1.
NFunction make_power(double p, int dim);

/// |y|^p without the 1/p normalization; the radial power family used as
/// a comparison function in growth hypotheses.
NFunction make_pnorm(double p, int dim);

/// |y1|^p1/p1 + |y2|^p2/p2 on R^{d1+d2}.
NFunction make_aniso(double p1, double p2, int d1, int d2);

/// exp(|y|^2) - 1.
NFunction make_exponential(int dim);

/// cosh(|y|) - 1.
NFunction make_cosh(int dim);

NFunction make_custom(int dim, std::function<double(const Vec&)> value,
                      std::function<Vec(const Vec&)> grad = nullptr, bool radial = false);

/// sum_j phi_j(O_j y). Throws KernelIntersectionNonTrivial when the stacked
/// maps have numerical rank < dim.
NFunction compose_linear(const std::vector<std::pair<NFunction, Mat>>& parts,
                         double rank_tol = 1e-10);

// ---------------------------------------------------------------------------
// Validation

struct SamplingConfig {
    int directions = 16;
    int segments = 1000;          // midpoint-convexity probes
    int point_samples = 1000;     // positivity/evenness probes
    double sample_radius = 10.0;
    std::vector<double> radii;    // superlinearity schedule; default 1e-2..1e2
    double tol = 1e-9;
    double superlinear_factor = 10.0;
    std::uint64_t seed = 20240601;

    static SamplingConfig defaults();
};

struct PropertyCheck {
    bool pass = true;
    Vec witness;          // empty when pass
    std::string detail;
};

struct NInfinityReport {
    PropertyCheck zero_at_zero;
    PropertyCheck positivity;
    PropertyCheck evenness;
    PropertyCheck convexity;
    PropertyCheck superlinearity;

    bool all_pass() const {
        return zero_at_zero.pass && positivity.pass && evenness.pass && convexity.pass &&
               superlinearity.pass;
    }
};

NInfinityReport check_n_infinity(const NFunction& phi,
                                 const SamplingConfig& cfg = SamplingConfig::defaults());

// ---------------------------------------------------------------------------
// Growth classes

struct Delta2Config {
    int random_rays = 8;
    std::vector<double> radii;    // default 1e-3..1e3 log grid
    double bounded_factor = 1.5;  // sup-ratio growth below this over the last
                                  // two decades counts as bounded
    double diverging_factor = 10.0;
    double safety = 1.1;
    std::uint64_t seed = 987654321;

    static Delta2Config defaults();
};

struct Delta2Report {
    bool holds = false;
    double constant = 0.0;        // tight sampled constant
    double constant_safe = 0.0;   // constant * safety margin
    Vec witness_ray;              // diverging direction when !holds
    double witness_radius = 0.0;
    std::vector<double> radius_sup;  // sup ratio per radius
};

/// Classification of the doubling condition Phi(2x) <= C Phi(x) + 1.
/// Throws InconclusiveGrowth when the schedule cannot decide.
Delta2Report check_delta2(const NFunction& phi,
                          const Delta2Config& cfg = Delta2Config::defaults());

struct PowerBound {
    double p = 0.0;
    double c = 0.0;
};

struct GrowthReport {
    Delta2Report delta2;
    std::optional<Delta2Report> nabla2;      // doubling class of the conjugate
    std::optional<PowerBound> power_bound;   // upper power envelope when delta2 holds
};

// ---------------------------------------------------------------------------
// Orderings Phi1 <= C + Phi2(k x)

enum class OrderMode { StrictIf, LlCurly };

struct OrderConfig {
    std::vector<double> k_grid;      // default 2^-10 .. 2^10
    int random_rays = 4;
    int samples_per_decade = 32;
    double r_start = 1e2;
    double r_cap = 1e9;
    double diverging_factor = 10.0;
    std::uint64_t seed = 24680;

    static OrderConfig defaults();
};

struct OrderWitness {
    double k = 0.0;
    double c = 0.0;
    bool stable = false;           // sup attained in the interior, not still growing
    double argmax_radius = 0.0;
};

struct OrderVerdict {
    bool holds = false;
    std::vector<OrderWitness> per_k;
    double chosen_k = 0.0;         // strictif: the witness pair
    double chosen_c = 0.0;
    double failing_k = 0.0;        // llcurly: first k without a stable constant
    Vec fail_witness;
};

OrderVerdict check_order(const NFunction& phi1, const NFunction& phi2, OrderMode mode,
                         const OrderConfig& cfg = OrderConfig::defaults());

struct RayScan {
    double sup = 0.0;
    bool stable = false;          // attained in the interior, not still growing
    double argmax_radius = 0.0;
    Vec argmax_x;
};

/// sup of g over sampled rays with an expanding radius range; stable when the
/// sup stops moving before the radius cap. Non-finite samples are skipped.
RayScan ray_sup_stable(const std::function<double(const Vec&)>& g, int dim,
                       const OrderConfig& cfg = OrderConfig::defaults());

/// Log-spaced helper grid, n points from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, int n);

} // namespace orlicz
