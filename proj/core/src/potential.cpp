#include "orlicz/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::vector<Vec> sphere_directions(int dim, int randoms, std::uint64_t seed) {
    std::vector<Vec> dirs;
    for (int i = 0; i < dim; ++i) {
        Vec e(dim, 0.0);
        e[i] = 1.0;
        dirs.push_back(e);
        e[i] = -1.0;
        dirs.push_back(e);
    }
    if (dim > 1) dirs.push_back(Vec(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
    Rng rng(seed);
    for (int i = 0; i < randoms; ++i) dirs.push_back(rng.unit_vec(dim));
    return dirs;
}

std::vector<Vec> x_grid(const HypGridConfig& cfg, int dim) {
    std::vector<Vec> pts;
    pts.push_back(zeros(dim));
    const auto dirs = sphere_directions(dim, cfg.x_directions, cfg.seed);
    for (int i = 1; i <= cfg.x_radii; ++i) {
        const double r = cfg.x_radius * static_cast<double>(i) / static_cast<double>(cfg.x_radii);
        for (const auto& e : dirs) pts.push_back(scaled(e, r));
    }
    return pts;
}

} // namespace

double TimeFunction::eval(double t) const {
    if (!poly.empty()) {
        double s = 0.0;
        for (std::size_t i = poly.size(); i-- > 0;) s = s * t + poly[i];
        return s;
    }
    if (trig) return trig->eval(t)[0];
    throw std::logic_error("TimeFunction: empty");
}

double Polynomial::eval(const Vec& x) const {
    double s = 0.0;
    for (const auto& term : terms) {
        double m = term.coeff;
        for (int k = 0; k < dim; ++k)
            for (int e = 0; e < term.powers[k]; ++e) m *= x[k];
        s += m;
    }
    return s;
}

Vec Polynomial::gradient(const Vec& x) const {
    Vec g(dim, 0.0);
    for (const auto& term : terms) {
        for (int k = 0; k < dim; ++k) {
            if (term.powers[k] == 0) continue;
            double m = term.coeff * term.powers[k];
            for (int j = 0; j < dim; ++j) {
                const int e = term.powers[j] - (j == k ? 1 : 0);
                for (int q = 0; q < e; ++q) m *= x[j];
            }
            g[k] += m;
        }
    }
    return g;
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& term : terms) {
        int s = 0;
        for (int e : term.powers) s += e;
        d = std::max(d, s);
    }
    return d;
}

std::string to_string(PotentialKind k) {
    switch (k) {
        case PotentialKind::Separable: return "separable";
        case PotentialKind::QuadraticForcing: return "quadratic_forcing";
        case PotentialKind::Manufactured: return "manufactured";
        case PotentialKind::Custom: return "custom";
    }
    return "custom";
}

Vec Potential::gradient(double t, const Vec& x) const {
    if (grad_fn) return grad_fn(t, x);
    const double h = std::cbrt(kEps) * std::max(1.0, norm2(x));
    Vec g(x.size());
    Vec xp = x, xm = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        g[i] = (value_fn(t, xp) - value_fn(t, xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    return g;
}

double Potential::time_mean(const Vec& x, int t_samples) const {
    double s = 0.0;
    for (int i = 0; i < t_samples; ++i)
        s += value_fn(period * static_cast<double>(i) / static_cast<double>(t_samples), x);
    return s / static_cast<double>(t_samples);
}

Potential make_separable(TimeFunction p, Polynomial q, double period) {
    if (q.dim < 1) throw std::invalid_argument("make_separable: polynomial dim must be positive");
    if (!p.valid()) throw std::invalid_argument("make_separable: empty time factor");
    Potential f;
    f.dim = q.dim;
    f.period = period;
    f.kind = PotentialKind::Separable;
    f.p_of_t = p;
    f.q_of_x = q;
    f.value_fn = [p, q](double t, const Vec& x) { return p.eval(t) * q.eval(x); };
    f.grad_fn = [p, q](double t, const Vec& x) { return scaled(q.gradient(x), p.eval(t)); };
    f.hyp.a = [q](const Vec& x) { return std::abs(q.eval(x)) + norm2(q.gradient(x)) + 1.0; };
    f.hyp.b = [p](double t) { return std::abs(p.eval(t)) + 1.0; };
    return f;
}

Potential make_quadratic_forcing(const TrigPoly& forcing, double period) {
    const int dim = static_cast<int>(forcing.dim());
    Potential f;
    f.dim = dim;
    f.period = period;
    f.kind = PotentialKind::QuadraticForcing;
    f.forcing = forcing;
    f.value_fn = [forcing](double t, const Vec& x) {
        return 0.5 * dot(x, x) + dot(forcing.eval(t), x);
    };
    f.grad_fn = [forcing](double t, const Vec& x) { return add(x, forcing.eval(t)); };
    f.hyp.a = [](const Vec& x) {
        const double r = norm2(x);
        return 1.0 + r + r * r;
    };
    f.hyp.b = [forcing](double t) { return 1.0 + 2.0 * norm2(forcing.eval(t)); };
    return f;
}

Potential make_manufactured(const NFunction& phi, const Trajectory& ustar,
                            const ManufacturedConfig& cfg) {
    if (phi.dim != ustar.dim) throw std::invalid_argument("make_manufactured: dim mismatch");
    const double period = ustar.period;
    const auto interp = TrigPoly::from_samples(ustar.values, ustar.n, ustar.dim, period);

    // flux derivative along the path: g(t) = H_phi(u*'(t)) u*''(t)
    auto flux_rate = [phi, interp](double t) {
        const Vec v = interp.derivative(t);
        const Vec vp = interp.second_derivative(t);
        const Mat h = phi.hessian(v);
        return matvec(h, vp);
    };

    // cross-check against the spectral derivative of sampled grad phi(u*')
    {
        const int m = cfg.fine_grid;
        std::vector<double> w(m * ustar.dim);
        for (int i = 0; i < m; ++i) {
            const double t = period * static_cast<double>(i) / static_cast<double>(m);
            const Vec wi = phi.gradient(interp.derivative(t));
            if (!all_finite(wi))
                throw DifferentiationUnstable(
                    "make_manufactured: flux not finite along the path");
            for (int k = 0; k < ustar.dim; ++k) w[i * ustar.dim + k] = wi[k];
        }
        const auto wpoly =
            TrigPoly::from_samples(w, m, ustar.dim, period).differentiated();
        double worst = 0.0, scale = 0.0;
        for (int i = 0; i < m; i += 7) {
            const double t = period * static_cast<double>(i) / static_cast<double>(m);
            const Vec spectral = wpoly.eval(t);
            const Vec chain = flux_rate(t);
            if (!all_finite(chain))
                throw DifferentiationUnstable(
                    "make_manufactured: flux derivative not finite along the path");
            worst = std::max(worst, norm_inf(sub(spectral, chain)));
            scale = std::max(scale, norm_inf(chain));
        }
        if (worst > cfg.smooth_tol * (1.0 + scale))
            throw DifferentiationUnstable(
                "make_manufactured: spectral and chain-rule flux derivatives disagree");
    }

    Potential f;
    f.dim = ustar.dim;
    f.period = period;
    f.kind = PotentialKind::Manufactured;
    f.exact_solution = interp;
    f.value_fn = [interp, flux_rate](double t, const Vec& x) {
        const Vec diff = sub(x, interp.eval(t));
        return 0.5 * dot(diff, diff) + dot(flux_rate(t), x);
    };
    f.grad_fn = [interp, flux_rate](double t, const Vec& x) {
        return add(sub(x, interp.eval(t)), flux_rate(t));
    };

    double u_max = 0.0, g_max = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double t = period * static_cast<double>(i) / 256.0;
        u_max = std::max(u_max, norm2(interp.eval(t)));
        g_max = std::max(g_max, norm2(flux_rate(t)));
    }
    const double b0 = 4.0 * (1.0 + u_max + g_max) * (1.0 + u_max + g_max);
    f.hyp.a = [](const Vec& x) {
        const double r = norm2(x);
        return 1.0 + r + r * r;
    };
    f.hyp.b = [b0](double) { return b0; };
    return f;
}

Potential make_custom_potential(int dim, double period,
                                std::function<double(double, const Vec&)> value,
                                std::function<Vec(double, const Vec&)> grad) {
    Potential f;
    f.dim = dim;
    f.period = period;
    f.kind = PotentialKind::Custom;
    f.value_fn = std::move(value);
    f.grad_fn = std::move(grad);
    return f;
}

// ---------------------------------------------------------------------------

ConditionVerdict check_condition_A(const Potential& f, const HypGridConfig& cfg) {
    if (!f.hyp.a || !f.hyp.b)
        throw MissingHypothesisData("check_condition_A: needs (a, b) envelopes");
    ConditionVerdict v;
    v.holds = true;
    const auto xs = x_grid(cfg, f.dim);
    for (int it = 0; it < cfg.t_samples; ++it) {
        const double t = f.period * static_cast<double>(it) / static_cast<double>(cfg.t_samples);
        const double bt = f.hyp.b(t);
        for (const auto& x : xs) {
            const double lhs = std::abs(f(t, x)) + norm2(f.gradient(t, x));
            const double rhs = f.hyp.a(x) * bt;
            const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? 1e300 : 0.0);
            if (ratio > v.max_ratio) {
                v.max_ratio = ratio;
                v.t_witness = t;
                v.x_witness = x;
            }
        }
    }
    if (v.max_ratio > 1.0 + cfg.tol) {
        v.holds = false;
        v.detail = "envelope exceeded";
    }
    return v;
}

ConditionVerdict check_condition_B(const Potential& f, const NFunction& phi,
                                   const NFunction& phi0,
                                   const std::function<double(double)>& dfun,
                                   const HypGridConfig& cfg, bool check_ordering) {
    if (!dfun) throw MissingHypothesisData("check_condition_B: needs d(t)");
    if (check_ordering) {
        const auto order = check_order(phi0, phi, OrderMode::LlCurly);
        if (!order.holds)
            throw OrderingViolation("check_condition_B: phi0 is not strictly below phi "
                                    "(every-k ordering failed at k = " +
                                    std::to_string(order.failing_k) + ")");
    }
    const auto star = conjugate(phi).to_nfunction();
    ConditionVerdict v;
    v.holds = true;
    double worst = -std::numeric_limits<double>::infinity();
    const auto xs = x_grid(cfg, f.dim);
    for (int it = 0; it < cfg.t_samples; ++it) {
        const double t = f.period * static_cast<double>(it) / static_cast<double>(cfg.t_samples);
        const double dt = dfun(t);
        if (!(dt >= 1.0))
            throw MissingHypothesisData("check_condition_B: d(t) must be >= 1");
        for (const auto& x : xs) {
            const double lhs = star(scaled(f.gradient(t, x), 1.0 / dt));
            const double slack = lhs - phi0(x) - 1.0;
            if (slack > worst) {
                worst = slack;
                v.t_witness = t;
                v.x_witness = x;
            }
        }
    }
    v.max_ratio = worst;
    if (worst > cfg.tol) {
        v.holds = false;
        v.detail = "display violated";
    }
    return v;
}

ConditionBRecipe condition_b_recipe(const Potential& f, const NFunction& phi,
                                    const HypGridConfig& cfg) {
    ConditionBRecipe recipe;

    double q = 1.5;
    std::function<double(double)> base;
    switch (f.kind) {
        case PotentialKind::Separable: {
            q = std::max(1.5, static_cast<double>(f.q_of_x.degree()) - 0.5);
            const auto p = f.p_of_t;
            base = [p](double t) { return std::max(1.0, std::abs(p.eval(t))); };
            break;
        }
        case PotentialKind::QuadraticForcing: {
            const auto fo = *f.forcing;
            base = [fo](double t) { return std::max(1.0, norm2(fo.eval(t))); };
            break;
        }
        case PotentialKind::Manufactured: {
            const Potential& fr = f;
            base = [fr](double t) {
                return std::max(1.0, norm2(fr.gradient(t, zeros(fr.dim))));
            };
            break;
        }
        default:
            throw MissingHypothesisData(
                "condition_b_recipe: no recipe for custom potentials; supply (phi0, d)");
    }
    if (f.kind != PotentialKind::Separable) {
        // growth of phi0 stays strictly below the slowest power direction of phi
        double pmin = 2.0;
        if (phi.kind == NKind::Power || phi.kind == NKind::PNorm) pmin = phi.p;
        if (phi.kind == NKind::Aniso) pmin = std::min(phi.p1, phi.p2);
        q = std::min(1.5, 1.0 + (pmin - 1.0) / 2.0);
    }
    recipe.q = q;
    recipe.phi0 = make_pnorm(q, f.dim);

    for (double c = 1.0; c < 1e18; c *= 2.0) {
        auto dfun = [base, c](double t) { return c * base(t); };
        ConditionVerdict v;
        try {
            v = check_condition_B(f, phi, recipe.phi0, dfun, cfg, c == 1.0);
        } catch (const OrderingViolation&) {
            throw;
        }
        if (v.holds) {
            recipe.dfun = dfun;
            recipe.c = c;
            recipe.found = true;
            break;
        }
    }
    if (!recipe.found)
        throw MissingHypothesisData("condition_b_recipe: no constant up to 2^60 closed the display");
    return recipe;
}

ConditionVerdict check_condition_H(const Potential& f, const HypGridConfig& cfg) {
    if (!f.hyp.split) throw MissingHypothesisData("check_condition_H: needs split-growth data");
    const auto& s = *f.hyp.split;
    if (s.d1 + s.d2 != f.dim)
        throw std::invalid_argument("check_condition_H: block dims must sum to potential dim");

    ConditionVerdict v;
    const double q1 = s.p1 / (s.p1 - 1.0);  // conjugate exponents
    const double q2 = s.p2 / (s.p2 - 1.0);
    const double win_a1 = s.p1 / q1, win_a2 = s.p2 / q2;
    const double win_b1 = s.p2 / q1, win_b2 = s.p1 / q2;
    auto out = [&](const char* name, double val, double hi) {
        v.holds = false;
        v.detail = std::string(name) + " = " + std::to_string(val) +
                   " outside the half-open window [0, " + std::to_string(hi) + ")";
    };
    if (!(s.alpha1 >= 0.0 && s.alpha1 < win_a1)) out("alpha1", s.alpha1, win_a1);
    else if (!(s.alpha2 >= 0.0 && s.alpha2 < win_a2)) out("alpha2", s.alpha2, win_a2);
    else if (!(s.beta1 >= 0.0 && s.beta1 < win_b1)) out("beta1", s.beta1, win_b1);
    else if (!(s.beta2 >= 0.0 && s.beta2 < win_b2)) out("beta2", s.beta2, win_b2);
    else v.holds = true;
    if (!v.holds) return v;

    const auto xs = x_grid(cfg, f.dim);
    for (int it = 0; it < cfg.t_samples && v.holds; ++it) {
        const double t = f.period * static_cast<double>(it) / static_cast<double>(cfg.t_samples);
        for (const auto& x : xs) {
            Vec x1(s.d1), x2(s.d2);
            for (int k = 0; k < s.d1; ++k) x1[k] = x[k];
            for (int k = 0; k < s.d2; ++k) x2[k] = x[s.d1 + k];
            const Vec g = f.gradient(t, x);
            double g1n = 0.0, g2n = 0.0;
            for (int k = 0; k < s.d1; ++k) g1n += g[k] * g[k];
            for (int k = 0; k < s.d2; ++k) g2n += g[s.d1 + k] * g[s.d1 + k];
            g1n = std::sqrt(g1n);
            g2n = std::sqrt(g2n);
            const double r1 = norm2(x1), r2 = norm2(x2);
            const double rhs1 = s.f1(t) * std::pow(r1, s.alpha1) +
                                s.g1(t) * std::pow(r2, s.beta1) + s.h1(t);
            const double rhs2 = s.f2(t) * std::pow(r2, s.alpha2) +
                                s.g2(t) * std::pow(r1, s.beta2) + s.h2(t);
            const double viol = std::max(g1n - rhs1, g2n - rhs2);
            if (viol > v.max_ratio) {
                v.max_ratio = viol;
                v.t_witness = t;
                v.x_witness = x;
            }
        }
    }
    if (v.max_ratio > cfg.tol) {
        v.holds = false;
        v.detail = "gradient bound violated";
    }
    return v;
}

CoercivityConfig CoercivityConfig::defaults() {
    CoercivityConfig cfg;
    cfg.radii = logspace(1.0, 1e3, 31);
    return cfg;
}

CoercivityReport check_coercivity_F(const Potential& f, const NFunction& phi0,
                                    const CoercivityConfig& cfg) {
    CoercivityReport rep;
    rep.radii = cfg.radii;
    const auto dirs = sphere_directions(f.dim, cfg.directions, cfg.seed);

    std::vector<std::vector<double>> curves(dirs.size());
    for (std::size_t di = 0; di < dirs.size(); ++di)
        for (double r : cfg.radii) {
            const Vec x = scaled(dirs[di], r);
            const double num = f.time_mean(x, cfg.t_samples) * f.period;
            const double den = phi0(scaled(x, 2.0));
            curves[di].push_back(den > 0.0 ? num / den : 0.0);
        }

    rep.worst_ratio.assign(cfg.radii.size(), std::numeric_limits<double>::infinity());
    for (std::size_t ri = 0; ri < cfg.radii.size(); ++ri)
        for (std::size_t di = 0; di < dirs.size(); ++di)
            if (curves[di][ri] < rep.worst_ratio[ri]) {
                rep.worst_ratio[ri] = curves[di][ri];
                if (ri + 1 == cfg.radii.size()) rep.worst_direction = dirs[di];
            }

    std::size_t mid = 0;
    const double r_hi = cfg.radii.back();
    while (mid + 1 < cfg.radii.size() && cfg.radii[mid] < r_hi / 10.0) ++mid;

    bool all_grow = true, any_bounded = false;
    for (const auto& curve : curves) {
        const double tail = curve.back();
        const double ref = std::max(curve[mid], 0.0);
        if (tail <= 0.0) {
            all_grow = false;
            any_bounded = true;
            break;
        }
        if (tail < cfg.growth_factor * std::max(ref, 1e-300)) all_grow = false;
        if (tail <= cfg.bounded_factor * std::max(ref, 1e-300)) any_bounded = true;
    }
    rep.verdict = all_grow ? CoercivityVerdict::Holds
                           : (any_bounded ? CoercivityVerdict::Fails
                                          : CoercivityVerdict::Inconclusive);
    return rep;
}

StructureReport check_condition_S(const NFunction& phi, const Potential& f, double Lambda,
                                  double lambda, const HypGridConfig& cfg) {
    if (!(Lambda > 0.0 && Lambda < 1.0))
        throw std::invalid_argument("check_condition_S: Lambda must lie in (0,1)");
    if (!(lambda > 0.0))
        throw std::invalid_argument("check_condition_S: lambda must be positive");
    if (!f.hyp.a || !f.hyp.b)
        throw MissingHypothesisData("check_condition_S: needs (a, b) envelopes");

    const auto star = conjugate(phi).to_nfunction();
    StructureReport rep;

    // Remark-level bound along the y grid alone
    {
        bool ok = true;
        const auto dirs = sphere_directions(phi.dim, 6, cfg.seed + 1);
        for (int i = 1; i <= cfg.y_radii && ok; ++i) {
            const double r =
                cfg.y_radius * static_cast<double>(i) / static_cast<double>(cfg.y_radii);
            for (const auto& e : dirs) {
                const Vec y = scaled(e, r);
                const double lhs = star(phi.gradient(y));
                const double rhs = Lambda / (1.0 - Lambda) * phi(scaled(y, 1.0 / Lambda));
                if (lhs > rhs + cfg.tol * (1.0 + std::abs(rhs))) {
                    ok = false;
                    break;
                }
            }
        }
        rep.remark_bound_holds = ok;
    }

    const auto xs = x_grid(cfg, f.dim);
    const auto ydirs = sphere_directions(phi.dim, 4, cfg.seed + 2);
    double worst = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg.t_samples; ++it) {
        const double t = f.period * static_cast<double>(it) / static_cast<double>(cfg.t_samples);
        const double bt = f.hyp.b(t);
        for (const auto& x : xs) {
            const double ax = f.hyp.a(x);
            const double fv = f(t, x);
            const double gx = norm2(f.gradient(t, x));
            for (int i = 0; i <= cfg.y_radii; ++i) {
                const double r =
                    cfg.y_radius * static_cast<double>(i) / static_cast<double>(cfg.y_radii);
                for (const auto& e : ydirs) {
                    const Vec y = scaled(e, r);
                    const double lhs = std::abs(phi(y) + fv) + gx +
                                       star(scaled(phi.gradient(y), 1.0 / lambda));
                    const double rhs = ax * (bt + phi(scaled(y, 1.0 / Lambda)));
                    worst = std::max(worst, lhs - rhs);
                }
            }
        }
    }
    rep.max_violation = worst;
    rep.condition_holds = worst <= cfg.tol;
    if (!rep.condition_holds) rep.detail = "structure display violated";
    return rep;
}

} // namespace orlicz
