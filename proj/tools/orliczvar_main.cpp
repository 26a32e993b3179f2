// Batch front end: load JSON specs, run solves and verification suites,
// write reports and plot data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/serialize.hpp"
#include "orlicz/solver.hpp"
#include "orlicz/trajectory.hpp"

namespace fs = std::filesystem;
using namespace orlicz;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFailedVerdict = 2;

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// temp-then-rename so partially written artifacts never land under their
// final name
void atomic_write(const fs::path& target, const std::string& content) {
    fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() / (".tmp-" + target.filename().string());
    {
        std::ofstream f(tmp, std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << content;
    }
    fs::rename(tmp, target);
}

void write_run_meta(const fs::path& out_dir, const std::string& command) {
    std::ostringstream os;
    os << "{\n  \"command\": \"" << command << "\",\n  \"timestamp\": " << std::time(nullptr)
       << "\n}\n";
    atomic_write(out_dir / "run_meta.json", os.str());
}

std::string plot_csv(const ProblemSpec& spec, const Trajectory& u) {
    // per-node magnitude and stationarity residual
    const auto g = discrete_action_gradient(spec, u);
    const double scale = static_cast<double>(spec.n) / spec.period;
    std::ostringstream os;
    os.precision(17);
    os << "t,|u|,residual\n";
    for (std::size_t i = 0; i < u.n; ++i) {
        double r2 = 0.0;
        for (int k = 0; k < spec.dim; ++k) {
            const double v = g[i * spec.dim + k] * scale;
            r2 += v * v;
        }
        os << u.t(i) << "," << norm2(u.node(i)) << "," << std::sqrt(r2) << "\n";
    }
    return os.str();
}

struct CommonOpts {
    std::string input;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool has_seed = false;
    long n_override = 0;
    double gtol_override = 0.0;
    int restarts_override = 0;
    bool emit_plot = false;
    bool override_hypotheses = false;
};

ProblemSpec load_problem(const CommonOpts& opt) {
    ProblemSpec spec = problem_from_json(slurp(opt.input));
    if (opt.has_seed) spec.solver.seed = opt.seed;
    if (opt.n_override > 0) spec.n = static_cast<std::size_t>(opt.n_override);
    if (opt.gtol_override > 0.0) spec.solver.gtol = opt.gtol_override;
    if (opt.restarts_override > 0) spec.solver.restarts = opt.restarts_override;
    if (opt.override_hypotheses) spec.override_hypotheses = true;
    spec.validate();
    return spec;
}

int cmd_solve(const CommonOpts& opt) {
    const ProblemSpec spec = load_problem(opt);
    SolveReport rep;
    try {
        rep = minimize(spec);
    } catch (const HypothesesNotSatisfied& e) {
        atomic_write(fs::path(opt.out_dir) / "report.json",
                     hypothesis_report_to_json(spec));
        write_run_meta(opt.out_dir, "solve");
        std::cerr << "solve: " << e.what() << "\n";
        return kExitFailedVerdict;
    }
    atomic_write(fs::path(opt.out_dir) / "report.json", solve_report_to_json(rep, spec));
    atomic_write(fs::path(opt.out_dir) / "minimizer.csv", to_csv(rep.minimizer));
    if (opt.emit_plot)
        atomic_write(fs::path(opt.out_dir) / "plot.csv", plot_csv(spec, rep.minimizer));
    write_run_meta(opt.out_dir, "solve");
    std::cout << (rep.cert.certified ? "certified" : "uncertified")
              << " action=" << rep.action << " residual=" << rep.cert.cross_residual << "\n";
    if (rep.status == SolveStatus::LineSearchStall || rep.status == SolveStatus::Overflow)
        return kExitFailedVerdict;
    return rep.cert.certified ? kExitOk : kExitFailedVerdict;
}

int cmd_certify(const CommonOpts& opt, const std::string& trajectory_path) {
    const ProblemSpec spec = load_problem(opt);
    const Trajectory u = trajectory_from_csv_file(trajectory_path);
    const CertifyReport rep = certify(spec, u);
    atomic_write(fs::path(opt.out_dir) / "report.json", certify_report_to_json(rep, spec));
    if (opt.emit_plot) atomic_write(fs::path(opt.out_dir) / "plot.csv", plot_csv(spec, u));
    write_run_meta(opt.out_dir, "certify");
    std::cout << (rep.certified ? "certified" : "uncertified")
              << " residual=" << rep.cross_residual << " threshold=" << rep.threshold << "\n";
    return rep.certified ? kExitOk : kExitFailedVerdict;
}

int cmd_verify_nfunction(const CommonOpts& opt) {
    const NFunction phi = nfunction_from_json(slurp(opt.input));
    const auto shape = check_n_infinity(phi);
    GrowthReport growth;
    try {
        growth = growth_report(phi);
    } catch (const InconclusiveGrowth& e) {
        std::cerr << "verify-nfunction: " << e.what() << "\n";
        return kExitError;
    }
    atomic_write(fs::path(opt.out_dir) / "report.json", growth_report_to_json(shape, growth));
    write_run_meta(opt.out_dir, "verify-nfunction");
    std::cout << "n_infinity=" << (shape.all_pass() ? "pass" : "fail")
              << " delta2=" << (growth.delta2.holds ? "holds" : "fails")
              << " nabla2=" << (growth.nabla2 && growth.nabla2->holds ? "holds" : "fails")
              << "\n";
    return shape.all_pass() ? kExitOk : kExitFailedVerdict;
}

int cmd_conjugate(const CommonOpts& opt) {
    const NFunction phi = nfunction_from_json(slurp(opt.input));
    const auto star = conjugate(phi);
    atomic_write(fs::path(opt.out_dir) / "report.json",
                 conjugate_report_to_json(phi, star, 200,
                                          opt.has_seed ? opt.seed : 1234));
    write_run_meta(opt.out_dir, "conjugate");
    std::cout << "mode=" << (star.mode() == ConjugateMode::Analytic ? "analytic" : "numeric")
              << "\n";
    return kExitOk;
}

int cmd_check_hypotheses(const CommonOpts& opt) {
    const ProblemSpec spec = load_problem(opt);
    const std::string rep = hypothesis_report_to_json(spec);
    atomic_write(fs::path(opt.out_dir) / "report.json", rep);
    write_run_meta(opt.out_dir, "check-hypotheses");
    const bool pass = run_hypothesis_gate(spec).pass;
    std::cout << (pass ? "hypotheses hold" : "some hypothesis fails") << "\n";
    return pass ? kExitOk : kExitFailedVerdict;
}

int cmd_inequalities(const CommonOpts& opt, int random_trials, long n, double period) {
    const NFunction phi = nfunction_from_json(slurp(opt.input));
    int failures = 0;
    const std::string rep = inequality_sweep_to_json(
        phi, random_trials, static_cast<std::size_t>(n), period,
        opt.has_seed ? opt.seed : 777, &failures);
    atomic_write(fs::path(opt.out_dir) / "report.json", rep);
    write_run_meta(opt.out_dir, "inequalities");
    std::cout << (random_trials - failures) << "/" << random_trials << " trials passed\n";
    return failures == 0 ? kExitOk : kExitFailedVerdict;
}

int cmd_refine(const CommonOpts& opt, const std::string& n_list_str) {
    const ProblemSpec spec = load_problem(opt);
    std::vector<std::size_t> ns;
    std::stringstream ss(n_list_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) ns.push_back(std::stoul(tok));
    if (ns.empty()) throw std::runtime_error("refine: empty grid list");
    const RefineReport rep = refine_study(spec, ns);
    atomic_write(fs::path(opt.out_dir) / "report.json", refine_report_to_json(rep));
    write_run_meta(opt.out_dir, "refine");
    for (const auto& row : rep.rows)
        std::cout << "N=" << row.n << " action=" << row.action
                  << " residual=" << row.cross_residual << "\n";
    bool ok = true;
    for (const auto& row : rep.rows) ok = ok && row.certified;
    return ok ? kExitOk : kExitFailedVerdict;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"orliczvar: periodic phi-Laplacian systems by direct minimization"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string trajectory_path;
    std::string n_list = "64,128,256";
    int random_trials = 100;
    long ineq_n = 128;
    double ineq_period = 1.0;

    auto add_common = [&](CLI::App* sub, bool needs_input = true) {
        auto* in = sub->add_option("input", opt.input, "input JSON path");
        auto* inflag = sub->add_option("--input", opt.input, "input JSON path");
        if (needs_input) {
            in->check(CLI::ExistingFile);
            inflag->excludes(in);
        }
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "seed override")
            ->each([&](const std::string&) { opt.has_seed = true; });
        sub->add_option("--n", opt.n_override, "grid size override");
        sub->add_option("--gtol", opt.gtol_override, "gradient tolerance override");
        sub->add_option("--restarts", opt.restarts_override, "restart count override");
        sub->add_flag("--emit-plot-data", opt.emit_plot, "write per-node plot csv");
        sub->add_flag("--override-hypotheses", opt.override_hypotheses,
                      "solve even when a hypothesis validator fails");
    };

    auto* solve = app.add_subcommand("solve", "minimize the action and certify");
    add_common(solve);
    auto* certify_cmd = app.add_subcommand("certify", "certify an existing trajectory");
    add_common(certify_cmd);
    certify_cmd->add_option("trajectory", trajectory_path, "minimizer CSV path")
        ->required()
        ->check(CLI::ExistingFile);
    auto* verify = app.add_subcommand("verify-nfunction", "shape and growth classification");
    add_common(verify);
    auto* conj = app.add_subcommand("conjugate", "conjugate diagnostics");
    add_common(conj);
    auto* hyp = app.add_subcommand("check-hypotheses", "run the hypothesis validators");
    add_common(hyp);
    auto* ineq = app.add_subcommand("inequalities", "random embedding-inequality sweep");
    add_common(ineq);
    ineq->add_option("--random", random_trials, "number of random trajectories");
    ineq->add_option("--grid", ineq_n, "trajectory grid size");
    ineq->add_option("--period", ineq_period, "trajectory period");
    auto* refine = app.add_subcommand("refine", "convergence study over grid sizes");
    add_common(refine);
    refine->add_option("--n-list", n_list, "comma-separated grid sizes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (certify_cmd->parsed()) return cmd_certify(opt, trajectory_path);
        if (verify->parsed()) return cmd_verify_nfunction(opt);
        if (conj->parsed()) return cmd_conjugate(opt);
        if (hyp->parsed()) return cmd_check_hypotheses(opt);
        if (ineq->parsed()) return cmd_inequalities(opt, random_trials, ineq_n, ineq_period);
        if (refine->parsed()) return cmd_refine(opt, n_list);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
