#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/nfunction.hpp"
#include "orlicz/orlicz_space.hpp"
#include "orlicz/potential.hpp"
#include "orlicz/trajectory.hpp"

namespace orlicz {

struct SolverParams {
    int max_iter = 5000;
    double gtol = 1e-8;          // exit when ||dI||_inf * N/T drops below
    int restarts = 1;
    std::uint64_t seed = 1;
    double perturbation = 1e-2;  // band-limited noise around the constant start
    int perturb_harmonics = 3;
    int memory = 10;             // quasi-Newton history length
    double c_res = 0.0;          // certification scale; 0 -> calibrate
    Vec init_offset;             // optional shift of the constant start
};

struct ProblemSpec {
    NFunction phi;
    Potential potential;
    double period = 1.0;
    int dim = 1;
    std::size_t n = 256;
    SolverParams solver;
    bool override_hypotheses = false;

    void validate() const;
};

enum class SolveStatus { Converged, IterationCap, LineSearchStall, Overflow };

std::string to_string(SolveStatus s);

struct ActionValue {
    double value = 0.0;
    bool overflowed = false;
};

/// (T/N) sum of phi(Du_i) + F(t_i, u_i) on the spec grid.
ActionValue discrete_action(const ProblemSpec& spec, const Trajectory& u);

/// Exact nodal gradient of the discrete action (N x d, row-major):
/// dI/du_i = (T/N) grad F(t_i, u_i) - [grad phi(Du_i) - grad phi(Du_{i-1})].
std::vector<double> discrete_action_gradient(const ProblemSpec& spec, const Trajectory& u);

struct HypothesisSummary {
    std::string n_infinity = "skipped";
    std::string condition_a = "skipped";
    std::string condition_b = "skipped";
    std::string coercivity = "skipped";
    double recipe_c = 0.0;   // constant the sublinearity recipe settled on
    double recipe_q = 0.0;   // growth exponent of the recipe comparison function

    /// Every validator that ran returned "holds" (and none is missing-data).
    bool gate_pass() const;
};

struct GateResult {
    HypothesisSummary summary;
    std::optional<ConditionBRecipe> recipe;
    bool pass = false;
};

/// Runs the applicable validators: N-infinity shape of phi, the (a,b)
/// envelope, the sublinearity display (given data or via the recipe), and
/// the mean coercivity curve.
GateResult run_hypothesis_gate(const ProblemSpec& spec);

struct CertifyReport {
    bool certified = false;
    double var_residual = 0.0;    // stationarity residual of the discrete action
    double cross_residual = 0.0;  // midpoint-consistent form; decays like 1/N
    double flux_wrap = 0.0;       // |grad phi(Du_0) - grad phi(Du_{N-1})|
    double u_wrap = 0.0;          // structural, identically zero on this grid
    bool strict_convexity_ok = false;
    double c_res_used = 0.0;
    double threshold = 0.0;       // c_res / N
    DistToBoundedReport dist_curve;
    HypothesisSummary hypotheses;
    std::string notes;
};

struct SolveReport {
    Trajectory minimizer;
    double action = 0.0;
    bool action_overflowed = false;
    double grad_norm_scaled = 0.0;
    SolveStatus status = SolveStatus::IterationCap;
    int iterations = 0;
    std::uint64_t best_seed = 0;
    bool mean_degenerate = false;
    CertifyReport cert;
};

/// Limited-memory quasi-Newton descent over periodic nodal paths, started at
/// the constant minimizing the time-mean of F plus band-limited noise.
/// Multi-restart keeps the best action; throws HypothesesNotSatisfied when a
/// validator fails and the spec does not override.
SolveReport minimize(const ProblemSpec& spec);

/// Residual and shape certification of a candidate path on the spec grid.
CertifyReport certify(const ProblemSpec& spec, const Trajectory& u);

struct RefineRow {
    std::size_t n = 0;
    double action = 0.0;
    double cross_residual = 0.0;
    double var_residual = 0.0;
    int iterations = 0;
    bool certified = false;
};

struct RefineReport {
    std::vector<RefineRow> rows;
};

/// Re-solves the spec across grid sizes; cross residuals should decay ~1/N
/// and actions should become Cauchy.
RefineReport refine_study(const ProblemSpec& spec, const std::vector<std::size_t>& n_list);

} // namespace orlicz
