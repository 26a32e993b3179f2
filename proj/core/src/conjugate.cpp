#include "orlicz/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "orlicz/errors.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec direction_of(const Vec& z) {
    const double n = norm2(z);
    return n > 0.0 ? scaled(z, 1.0 / n) : zeros(z.size());
}

// Solve the small dense system J x = b in place; false when pivoting breaks down.
bool solve_dense(Mat j, Vec b, Vec& x) {
    const std::size_t n = j.rows;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(j(r, col)) > std::abs(j(piv, col))) piv = r;
        if (!(std::abs(j(piv, col)) > 1e-300) || !std::isfinite(j(piv, col))) return false;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(j.data[piv * n + c], j.data[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = j(r, col) / j(col, col);
            for (std::size_t c = col; c < n; ++c) j(r, c) -= f * j(col, c);
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= j(i, c) * x[c];
        x[i] = s / j(i, i);
        if (!std::isfinite(x[i])) return false;
    }
    return true;
}

double golden_max_1d(const std::function<double(double)>& f, double lo, double hi, int iters) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iters; ++i) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

} // namespace

struct ConjugateFunction::Impl {
    std::shared_ptr<const NFunction> base;
    ConjugateConfig cfg;
    ConjugateMode mode = ConjugateMode::Numeric;

    std::function<double(const Vec&)> analytic_value;
    std::function<Vec(const Vec&)> analytic_arg;

    mutable std::shared_mutex cache_mutex;
    mutable std::map<Vec, Vec> cache;

    double objective(const Vec& y, const Vec& zeta) const { return dot(y, zeta) - (*base)(y); }

    // Radius whose sphere has radial derivative of phi above |zeta| in every
    // probed direction; the concave objective then peaks strictly inside.
    double bracket_radius(const Vec& zeta) const {
        const int d = base->dim;
        const double zn = norm2(zeta);
        std::vector<Vec> dirs;
        if (d == 1) {
            dirs = {{1.0}, {-1.0}};
        } else {
            for (int i = 0; i < d; ++i) {
                Vec e(d, 0.0);
                e[i] = 1.0;
                dirs.push_back(e);
                e[i] = -1.0;
                dirs.push_back(e);
            }
            Rng rng(4242);
            for (int i = 0; i < cfg.bracket_dirs; ++i) dirs.push_back(rng.unit_vec(d));
            const Vec zdir = direction_of(zeta);
            if (norm2(zdir) > 0.0) dirs.push_back(zdir);
        }

        double r = 1.0;
        double prev_gmin = -kInf;
        int stagnant = 0;
        while (true) {
            double gmin = kInf;
            for (const auto& e : dirs) {
                const Vec g = base->gradient(scaled(e, r));
                gmin = std::min(gmin, dot(g, e));
                if (!std::isfinite(gmin)) break;
            }
            if (std::isinf(gmin) || gmin > zn) return r;
            if (gmin <= prev_gmin + 1e-12 * (1.0 + std::abs(prev_gmin))) {
                if (++stagnant >= 8)
                    throw MaximizerNotBracketed(
                        "conjugate: boundary slope stopped growing below |zeta|; "
                        "input does not look superlinear");
            } else {
                stagnant = 0;
            }
            prev_gmin = gmin;
            r *= 2.0;
            if (r > cfg.bracket_cap) return kInf;  // sup overflows double range
        }
    }

    Vec solve_maximizer(const Vec& zeta, double* value_out) const {
        const int d = base->dim;
        const double zn = norm2(zeta);
        if (zn == 0.0) {
            if (value_out) *value_out = 0.0;
            return zeros(d);
        }
        const double radius = bracket_radius(zeta);
        if (std::isinf(radius)) {
            if (value_out) *value_out = kInf;
            return zeros(d);
        }

        // damped Newton on grad phi(y) = zeta
        Vec y = scaled(direction_of(zeta), std::min(1.0, 0.5 * radius));
        double fy = objective(y, zeta);
        {
            const Vec y0 = zeros(d);
            if (objective(y0, zeta) > fy) {
                y = y0;
                fy = 0.0;
            }
        }
        bool converged = false;
        for (int it = 0; it < cfg.newton_max_iter; ++it) {
            const Vec g = base->gradient(y);
            Vec resid = sub(zeta, g);
            if (norm2(resid) <= cfg.newton_tol * (1.0 + zn)) {
                converged = true;
                break;
            }
            Vec step;
            if (!all_finite(g) || !solve_dense(base->hessian(y), resid, step)) break;
            double alpha = 1.0;
            bool accepted = false;
            for (int h = 0; h < 60; ++h) {
                Vec cand = y;
                axpy(alpha, step, cand);
                const double fc = objective(cand, zeta);
                if (std::isfinite(fc) && fc > fy) {
                    y = cand;
                    fy = fc;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) break;
        }

        if (!converged) {
            // coordinate-wise golden-section ascent on the bracketing box
            for (int sweep = 0; sweep < cfg.coordinate_sweeps; ++sweep) {
                const double before = fy;
                for (int i = 0; i < d; ++i) {
                    const double xi = golden_max_1d(
                        [&](double v) {
                            Vec cand = y;
                            cand[i] = v;
                            const double val = objective(cand, zeta);
                            return std::isfinite(val) ? val : -kInf;
                        },
                        -radius, radius, 80);
                    Vec cand = y;
                    cand[i] = xi;
                    const double fc = objective(cand, zeta);
                    if (std::isfinite(fc) && fc > fy) {
                        y = cand;
                        fy = fc;
                    }
                }
                if (fy - before <= 1e-13 * (1.0 + std::abs(fy))) break;
            }
        }
        if (value_out) *value_out = fy;
        return y;
    }

    Vec cached_argmax(const Vec& zeta) const {
        if (cfg.cache_enabled) {
            std::shared_lock lock(cache_mutex);
            const auto it = cache.find(zeta);
            if (it != cache.end()) return it->second;
        }
        Vec y = solve_maximizer(zeta, nullptr);
        if (cfg.cache_enabled) {
            std::unique_lock lock(cache_mutex);
            cache.emplace(zeta, y);
        }
        return y;
    }
};

double ConjugateFunction::eval(const Vec& zeta) const {
    if (impl_->mode == ConjugateMode::Analytic) return impl_->analytic_value(zeta);
    double v = 0.0;
    const Vec y = impl_->solve_maximizer(zeta, &v);
    (void)y;
    return v;
}

Vec ConjugateFunction::argmax(const Vec& zeta) const {
    if (impl_->mode == ConjugateMode::Analytic) return impl_->analytic_arg(zeta);
    return impl_->cached_argmax(zeta);
}

ConjugateMode ConjugateFunction::mode() const { return impl_->mode; }
int ConjugateFunction::dim() const { return impl_->base->dim; }
const NFunction& ConjugateFunction::base() const { return *impl_->base; }

NFunction ConjugateFunction::to_nfunction() const {
    NFunction f;
    f.dim = dim();
    f.kind = NKind::Custom;
    f.radial = impl_->base->radial;
    auto impl = impl_;
    if (impl->mode == ConjugateMode::Analytic) {
        f.value_fn = impl->analytic_value;
        f.grad_fn = impl->analytic_arg;
    } else {
        f.value_fn = [impl](const Vec& z) {
            double v = 0.0;
            impl->solve_maximizer(z, &v);
            return v;
        };
        f.grad_fn = [impl](const Vec& z) { return impl->cached_argmax(z); };
    }
    return f;
}

ConjugateFunction conjugate(const NFunction& phi, const ConjugateConfig& cfg) {
    ConjugateFunction c;
    c.impl_ = std::make_shared<ConjugateFunction::Impl>();
    auto& impl = *c.impl_;
    impl.base = std::make_shared<NFunction>(phi);
    impl.cfg = cfg;
    impl.mode = ConjugateMode::Numeric;
    if (cfg.force_numeric) return c;

    switch (phi.kind) {
        case NKind::Power: {
            const double q = phi.p / (phi.p - 1.0);
            impl.analytic_value = [q](const Vec& z) { return std::pow(norm2(z), q) / q; };
            impl.analytic_arg = [q](const Vec& z) {
                const double n = norm2(z);
                if (n == 0.0) return zeros(z.size());
                return scaled(z, std::pow(n, q - 2.0));
            };
            impl.mode = ConjugateMode::Analytic;
            break;
        }
        case NKind::PNorm: {
            // (p |y|^p / p)* via scaling: p^{1-q} |z|^q / q
            const double p = phi.p;
            const double q = p / (p - 1.0);
            const double scale = std::pow(p, 1.0 - q) / q;
            impl.analytic_value = [q, scale](const Vec& z) {
                return scale * std::pow(norm2(z), q);
            };
            impl.analytic_arg = [p](const Vec& z) {
                const double n = norm2(z);
                if (n == 0.0) return zeros(z.size());
                const double r = std::pow(n / p, 1.0 / (p - 1.0));
                return scaled(z, r / n);
            };
            impl.mode = ConjugateMode::Analytic;
            break;
        }
        case NKind::Aniso: {
            const double q1 = phi.p1 / (phi.p1 - 1.0);
            const double q2 = phi.p2 / (phi.p2 - 1.0);
            const int d1 = phi.d1, d2 = phi.d2;
            auto block_norms = [d1, d2](const Vec& z) {
                double r1 = 0.0, r2 = 0.0;
                for (int i = 0; i < d1; ++i) r1 += z[i] * z[i];
                for (int i = 0; i < d2; ++i) r2 += z[d1 + i] * z[d1 + i];
                return std::pair<double, double>(std::sqrt(r1), std::sqrt(r2));
            };
            impl.analytic_value = [q1, q2, block_norms](const Vec& z) {
                const auto [r1, r2] = block_norms(z);
                return std::pow(r1, q1) / q1 + std::pow(r2, q2) / q2;
            };
            impl.analytic_arg = [q1, q2, d1, d2, block_norms](const Vec& z) {
                const auto [r1, r2] = block_norms(z);
                Vec y(z.size(), 0.0);
                const double a1 = r1 > 0.0 ? std::pow(r1, q1 - 2.0) : 0.0;
                const double a2 = r2 > 0.0 ? std::pow(r2, q2 - 2.0) : 0.0;
                for (int i = 0; i < d1; ++i) y[i] = a1 * z[i];
                for (int i = 0; i < d2; ++i) y[d1 + i] = a2 * z[d1 + i];
                return y;
            };
            impl.mode = ConjugateMode::Analytic;
            break;
        }
        case NKind::Cosh: {
            impl.analytic_value = [](const Vec& z) {
                const double s = norm2(z);
                return s * std::asinh(s) - std::hypot(1.0, s) + 1.0;
            };
            impl.analytic_arg = [](const Vec& z) {
                const double s = norm2(z);
                if (s == 0.0) return zeros(z.size());
                return scaled(z, std::asinh(s) / s);
            };
            impl.mode = ConjugateMode::Analytic;
            break;
        }
        default:
            break;  // numeric
    }
    return c;
}

double young_gap(const NFunction& phi, const ConjugateFunction& phistar, const Vec& x,
                 const Vec& y) {
    if (x.size() != y.size() || static_cast<int>(x.size()) != phi.dim)
        throw std::invalid_argument("young_gap: dimension mismatch");
    return phi(x) + phistar(y) - dot(x, y);
}

double check_young_identity(const NFunction& phi, const ConjugateFunction& phistar, int samples,
                            double radius, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const Vec x = rng.uniform_vec(phi.dim, -radius, radius);
        const Vec g = phi.gradient(x);
        const double lhs = dot(x, g);
        const double rhs = phi(x) + phistar(g);
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
    }
    return worst;
}

Nabla2Report check_nabla2(const NFunction& phi, const ConjugateConfig& ccfg,
                          const Delta2Config& dcfg) {
    Nabla2Report rep;
    const auto star = conjugate(phi, ccfg).to_nfunction();
    rep.conjugate_delta2 = check_delta2(star, dcfg);
    rep.holds = rep.conjugate_delta2.holds;

    OrderConfig ocfg;
    ocfg.samples_per_decade = 24;
    for (double r : {0.25, 0.5}) {
        Nabla2Witness w;
        w.r = r;
        for (int e = 0; e <= 10 && !w.found; ++e) {
            const double l = std::pow(2.0, e);
            auto scan = ray_sup_stable(
                [&](const Vec& x) { return phi(x) - (r / l) * phi(scaled(x, l)); }, phi.dim,
                ocfg);
            if (scan.stable) {
                w.found = true;
                w.l = l;
                w.c = std::max(scan.sup, 0.0);
            }
        }
        rep.witnesses.push_back(w);
    }
    return rep;
}

GrowthReport growth_report(const NFunction& phi, const ConjugateConfig& ccfg,
                           const Delta2Config& dcfg) {
    GrowthReport rep;
    rep.delta2 = check_delta2(phi, dcfg);
    rep.nabla2 = check_nabla2(phi, ccfg, dcfg).conjugate_delta2;
    if (rep.delta2.holds) {
        PowerBound pb;
        pb.p = std::log2(std::max(rep.delta2.constant, 2.0));
        double c = 0.0;
        for (double r : logspace(1.0, 1e3, 40)) {
            Vec e(phi.dim, 0.0);
            e[0] = r;
            const double v = phi(e);
            if (std::isfinite(v)) c = std::max(c, (v - 1.0) / std::pow(r, pb.p));
        }
        pb.c = std::max(c, 1.0);
        rep.power_bound = pb;
    }
    return rep;
}

} // namespace orlicz
