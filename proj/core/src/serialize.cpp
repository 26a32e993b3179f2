#include "orlicz/serialize.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string& text, std::size_t byte, const std::string& what) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "json parse error at line " << line << ", column " << col << ": " << what;
    throw std::runtime_error(os.str());
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        parse_fail(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
}

json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

TrigPoly trig_from(const json& j, double period) {
    TrigPoly p;
    p.period = period;
    p.a0 = j.at("a0").get<std::vector<double>>();
    p.a = j.at("a").get<std::vector<std::vector<double>>>();
    p.b = j.at("b").get<std::vector<std::vector<double>>>();
    if (p.a.size() != p.a0.size() || p.b.size() != p.a0.size())
        throw std::runtime_error("trig object: a/b must have one row per dimension");
    return p;
}

NFunction nfunction_from(const json& j);

NFunction composed_from(const json& j) {
    std::vector<std::pair<NFunction, Mat>> parts;
    for (const auto& pj : j.at("parts")) {
        NFunction inner = nfunction_from(pj.at("phi"));
        const auto rows = pj.at("matrix").get<std::vector<std::vector<double>>>();
        if (rows.empty()) throw std::runtime_error("composed part: empty matrix");
        Mat m(rows.size(), rows[0].size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != m.cols)
                throw std::runtime_error("composed part: ragged matrix");
            for (std::size_t c = 0; c < m.cols; ++c) m(r, c) = rows[r][c];
        }
        parts.emplace_back(std::move(inner), std::move(m));
    }
    return compose_linear(parts);
}

NFunction nfunction_from(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power") return make_power(j.at("p").get<double>(), j.at("dim").get<int>());
    if (kind == "pnorm") return make_pnorm(j.at("p").get<double>(), j.at("dim").get<int>());
    if (kind == "aniso")
        return make_aniso(j.at("p1").get<double>(), j.at("p2").get<double>(),
                          j.at("d1").get<int>(), j.at("d2").get<int>());
    if (kind == "exp") return make_exponential(j.at("dim").get<int>());
    if (kind == "cosh") return make_cosh(j.at("dim").get<int>());
    if (kind == "composed") return composed_from(j);
    throw std::runtime_error("unknown nfunction kind: " + kind);
}

json nfunction_to(const NFunction& f) {
    json j;
    j["kind"] = to_string(f.kind);
    switch (f.kind) {
        case NKind::Power:
        case NKind::PNorm:
            j["p"] = f.p;
            j["dim"] = f.dim;
            break;
        case NKind::Aniso:
            j["p1"] = f.p1;
            j["p2"] = f.p2;
            j["d1"] = f.d1;
            j["d2"] = f.d2;
            break;
        case NKind::Exponential:
        case NKind::Cosh:
            j["dim"] = f.dim;
            break;
        case NKind::Composed: {
            j["dim"] = f.dim;
            json parts = json::array();
            for (const auto& part : f.parts) {
                json pj;
                pj["phi"] = nfunction_to(*part.phi);
                json rows = json::array();
                for (std::size_t r = 0; r < part.map.rows; ++r) {
                    json row = json::array();
                    for (std::size_t c = 0; c < part.map.cols; ++c)
                        row.push_back(part.map(r, c));
                    rows.push_back(row);
                }
                pj["matrix"] = rows;
                parts.push_back(pj);
            }
            j["parts"] = parts;
            break;
        }
        case NKind::Custom:
            throw std::runtime_error("custom nfunctions are not serializable");
    }
    return j;
}

TimeFunction time_function_from(const json& j, double period) {
    TimeFunction tf;
    if (j.contains("poly")) {
        tf.poly = j.at("poly").get<std::vector<double>>();
    } else if (j.contains("trig")) {
        tf.trig = trig_from(j.at("trig"), period);
        if (tf.trig->dim() != 1)
            throw std::runtime_error("time function trig block must be one-dimensional");
    } else if (j.contains("const")) {
        tf = TimeFunction::constant(j.at("const").get<double>());
    } else {
        throw std::runtime_error("time function needs poly, trig or const");
    }
    return tf;
}

Polynomial polynomial_from(const json& j, int dim) {
    Polynomial q;
    q.dim = dim;
    for (const auto& tj : j.at("terms")) {
        Polynomial::Term term;
        term.coeff = tj.at("c").get<double>();
        term.powers = tj.at("pow").get<std::vector<int>>();
        if (static_cast<int>(term.powers.size()) != dim)
            throw std::runtime_error("polynomial term: power list must match dim");
        for (int e : term.powers)
            if (e < 0) throw std::runtime_error("polynomial term: negative exponent");
        q.terms.push_back(std::move(term));
    }
    return q;
}

Potential potential_from(const json& j, double period) {
    const std::string kind = j.at("kind").get<std::string>();
    Potential f;
    if (kind == "separable") {
        const int dim = j.at("dim").get<int>();
        f = make_separable(time_function_from(j.at("P"), period),
                           polynomial_from(j.at("Q"), dim), period);
    } else if (kind == "quadratic_forcing") {
        f = make_quadratic_forcing(trig_from(j.at("forcing"), period), period);
    } else if (kind == "manufactured") {
        const NFunction phi = nfunction_from(j.at("phi"));
        const std::size_t n_build = j.value("n_build", std::size_t{256});
        const TrigPoly ustar = trig_from(j.at("ustar"), period);
        f = make_manufactured(phi, Trajectory::from_trig(ustar, n_build));
    } else {
        throw std::runtime_error("unknown potential kind: " + kind);
    }
    if (j.contains("phi0")) f.hyp.phi0 = nfunction_from(j.at("phi0"));
    if (j.contains("d_const")) {
        const double dc = j.at("d_const").get<double>();
        if (dc < 1.0) throw std::runtime_error("d_const must be >= 1");
        f.hyp.dfun = [dc](double) { return dc; };
    }
    if (j.contains("split")) {
        const auto& s = j.at("split");
        SplitGrowthData sd;
        sd.p1 = s.at("p1").get<double>();
        sd.p2 = s.at("p2").get<double>();
        sd.d1 = s.at("d1").get<int>();
        sd.d2 = s.at("d2").get<int>();
        sd.alpha1 = s.at("alpha1").get<double>();
        sd.alpha2 = s.at("alpha2").get<double>();
        sd.beta1 = s.at("beta1").get<double>();
        sd.beta2 = s.at("beta2").get<double>();
        auto cfun = [&](const char* key) {
            const double c = s.value(key, 0.0);
            return std::function<double(double)>([c](double) { return c; });
        };
        sd.f1 = cfun("f1");
        sd.f2 = cfun("f2");
        sd.g1 = cfun("g1");
        sd.g2 = cfun("g2");
        sd.h1 = cfun("h1");
        sd.h2 = cfun("h2");
        f.hyp.split = sd;
    }
    return f;
}

json trig_to(const TrigPoly& p) {
    json j;
    j["a0"] = p.a0;
    j["a"] = p.a;
    j["b"] = p.b;
    return j;
}

} // namespace

NFunction nfunction_from_json(const std::string& text) { return nfunction_from(parse(text)); }

std::string nfunction_to_json(const NFunction& f) { return nfunction_to(f).dump(2); }

Potential potential_from_json(const std::string& text, double period) {
    return potential_from(parse(text), period);
}

ProblemSpec problem_from_json(const std::string& text) {
    const json j = parse(text);
    ProblemSpec spec;
    spec.period = j.at("T").get<double>();
    spec.dim = j.at("d").get<int>();
    spec.n = j.at("N").get<std::size_t>();
    spec.phi = nfunction_from(j.at("phi"));
    spec.potential = potential_from(j.at("potential"), spec.period);
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        spec.solver.max_iter = s.value("max_iter", spec.solver.max_iter);
        spec.solver.gtol = s.value("gtol", spec.solver.gtol);
        spec.solver.restarts = s.value("restarts", spec.solver.restarts);
        spec.solver.seed = s.value("seed", spec.solver.seed);
        spec.solver.perturbation = s.value("perturbation", spec.solver.perturbation);
        spec.solver.memory = s.value("memory", spec.solver.memory);
        spec.solver.c_res = s.value("c_res", spec.solver.c_res);
    }
    spec.override_hypotheses = j.value("override_hypotheses", false);
    spec.validate();
    return spec;
}

namespace {

json hypotheses_to(const HypothesisSummary& h) {
    json j;
    j["n_infinity"] = h.n_infinity;
    j["condition_a"] = h.condition_a;
    j["condition_b"] = h.condition_b;
    j["coercivity"] = h.coercivity;
    if (h.recipe_c > 0.0) {
        j["recipe_c"] = h.recipe_c;
        j["recipe_q"] = h.recipe_q;
    }
    return j;
}

json dist_curve_to(const DistToBoundedReport& d) {
    json j;
    j["levels"] = json::array();
    j["distances"] = json::array();
    for (double v : d.levels) j["levels"].push_back(num(v));
    for (double v : d.distances) j["distances"].push_back(num(v));
    j["min_distance"] = num(d.min_distance);
    j["minimizing_level"] = num(d.minimizing_level);
    return j;
}

json certify_to(const CertifyReport& c) {
    json j;
    j["certified"] = c.certified;
    j["el_residual"] = num(c.cross_residual);
    j["stationarity_residual"] = num(c.var_residual);
    j["flux_wrap_residual"] = num(c.flux_wrap);
    j["u_wrap_residual"] = num(c.u_wrap);
    j["strict_convexity"] = c.strict_convexity_ok;
    j["c_res"] = num(c.c_res_used);
    j["threshold"] = num(c.threshold);
    j["hypotheses"] = hypotheses_to(c.hypotheses);
    j["dist_to_bounded"] = dist_curve_to(c.dist_curve);
    if (!c.notes.empty()) j["notes"] = c.notes;
    return j;
}

} // namespace

std::string solve_report_to_json(const SolveReport& rep, const ProblemSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["d"] = spec.dim;
    j["T"] = spec.period;
    j["seed"] = spec.solver.seed;
    j["status"] = to_string(rep.status);
    j["action"] = num(rep.action);
    j["action_overflowed"] = rep.action_overflowed;
    j["grad_norm_scaled"] = num(rep.grad_norm_scaled);
    j["iterations"] = rep.iterations;
    j["restart_best_seed"] = rep.best_seed;
    j["mean_degenerate"] = rep.mean_degenerate;
    j["certification"] = certify_to(rep.cert);
    return j.dump(2);
}

std::string certify_report_to_json(const CertifyReport& rep, const ProblemSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["d"] = spec.dim;
    j["T"] = spec.period;
    j["certification"] = certify_to(rep);
    return j.dump(2);
}

std::string refine_report_to_json(const RefineReport& rep) {
    json rows = json::array();
    for (const auto& r : rep.rows) {
        json row;
        row["n"] = r.n;
        row["action"] = num(r.action);
        row["el_residual"] = num(r.cross_residual);
        row["stationarity_residual"] = num(r.var_residual);
        row["iterations"] = r.iterations;
        row["certified"] = r.certified;
        rows.push_back(row);
    }
    json j;
    j["rows"] = rows;
    return j.dump(2);
}

std::string growth_report_to_json(const NInfinityReport& shape, const GrowthReport& growth) {
    json j;
    auto prop = [](const PropertyCheck& c) {
        json p;
        p["pass"] = c.pass;
        if (!c.pass) {
            p["witness"] = vec_json(c.witness);
            p["detail"] = c.detail;
        }
        return p;
    };
    j["n_infinity"] = {{"zero_at_zero", prop(shape.zero_at_zero)},
                       {"positivity", prop(shape.positivity)},
                       {"evenness", prop(shape.evenness)},
                       {"convexity", prop(shape.convexity)},
                       {"superlinearity", prop(shape.superlinearity)},
                       {"all_pass", shape.all_pass()}};
    json d2;
    d2["verdict"] = growth.delta2.holds ? "holds" : "fails";
    if (growth.delta2.holds) {
        d2["constant"] = num(growth.delta2.constant);
        d2["constant_safe"] = num(growth.delta2.constant_safe);
    } else {
        d2["witness_ray"] = vec_json(growth.delta2.witness_ray);
        d2["witness_radius"] = num(growth.delta2.witness_radius);
    }
    j["delta2"] = d2;
    if (growth.nabla2) {
        json n2;
        n2["verdict"] = growth.nabla2->holds ? "holds" : "fails";
        if (growth.nabla2->holds) n2["conjugate_constant"] = num(growth.nabla2->constant);
        j["nabla2"] = n2;
    }
    if (growth.power_bound) {
        j["power_bound"] = {{"p", num(growth.power_bound->p)},
                            {"c", num(growth.power_bound->c)}};
    }
    return j.dump(2);
}

std::string conjugate_report_to_json(const NFunction& phi, const ConjugateFunction& star,
                                     int samples, std::uint64_t seed) {
    json j;
    j["mode"] = star.mode() == ConjugateMode::Analytic ? "analytic" : "numeric";
    j["young_identity_max_rel_dev"] = num(check_young_identity(phi, star, samples, 2.0, seed));

    // biconjugation observed through the numeric layer
    const auto star_nf = star.to_nfunction();
    const auto bistar = conjugate(star_nf).to_nfunction();
    Rng rng(seed + 1);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Vec x = rng.uniform_vec(phi.dim, -2.0, 2.0);
        const double a = phi(x), b = bistar(x);
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
    }
    j["biconjugation_max_rel_dev"] = num(worst);

    json table = json::array();
    Rng rng2(seed + 2);
    for (int i = 0; i < 8; ++i) {
        const Vec z = rng2.uniform_vec(phi.dim, -2.0, 2.0);
        json row;
        row["zeta"] = vec_json(z);
        row["value"] = num(star(z));
        row["argmax"] = vec_json(star.argmax(z));
        table.push_back(row);
    }
    j["samples"] = table;
    return j.dump(2);
}

std::string hypothesis_report_to_json(const ProblemSpec& spec) {
    const GateResult gate = run_hypothesis_gate(spec);
    json j;
    j["verdicts"] = hypotheses_to(gate.summary);
    j["gate_pass"] = gate.pass;

    if (spec.potential.hyp.split) {
        const auto h = check_condition_H(spec.potential);
        json hj;
        hj["holds"] = h.holds;
        if (!h.holds) hj["detail"] = h.detail;
        j["condition_h"] = hj;
    }
    const auto s = check_condition_S(spec.phi, spec.potential, 0.5, 1.0);
    j["condition_s"] = {{"holds", s.condition_holds},
                        {"remark_bound", s.remark_bound_holds},
                        {"max_violation", num(s.max_violation)}};
    return j.dump(2);
}

std::string inequality_sweep_to_json(const NFunction& phi, int trials, std::size_t n,
                                     double period, std::uint64_t seed, int* failures_out) {
    const double need = std::max(static_cast<double>(n) / period, 1.0 / period) * 1.05 + 1.0;
    const auto profile = radial_minorant_covering(phi, need, 128);
    InequalityConfig icfg;
    int fail = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    for (int tr = 0; tr < trials; ++tr) {
        const auto u = random_bandlimited(period, n, phi.dim, 3, 0.3, seed + tr);
        const auto rep = inequality_suite(phi, u, profile, icfg);
        if (!rep.all_pass()) ++fail;
        worst_slack = std::min({worst_slack, rep.morrey.min_slack, rep.sobolev.min_slack,
                                rep.pw.min_slack, rep.aniso_pw.min_slack});
    }
    if (failures_out) *failures_out = fail;
    json j;
    j["trials"] = trials;
    j["passed"] = trials - fail;
    j["failed"] = fail;
    j["worst_slack"] = num(worst_slack);
    return j.dump(2);
}

} // namespace orlicz
