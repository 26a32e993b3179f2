#include "orlicz/nfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double fd_step(const Vec& y) {
    return std::cbrt(kEps) * std::max(1.0, norm2(y));
}

} // namespace

std::string to_string(NKind k) {
    switch (k) {
        case NKind::Power: return "power";
        case NKind::PNorm: return "pnorm";
        case NKind::Aniso: return "aniso";
        case NKind::Exponential: return "exp";
        case NKind::Cosh: return "cosh";
        case NKind::Composed: return "composed";
        case NKind::Custom: return "custom";
    }
    return "custom";
}

Vec NFunction::gradient(const Vec& y) const {
    if (grad_fn) return grad_fn(y);
    const double h = fd_step(y);
    Vec g(y.size());
    Vec yp = y, ym = y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        yp[i] = y[i] + h;
        ym[i] = y[i] - h;
        g[i] = (value_fn(yp) - value_fn(ym)) / (2.0 * h);
        yp[i] = y[i];
        ym[i] = y[i];
    }
    return g;
}

Mat NFunction::hessian(const Vec& y) const {
    if (hess_fn) return hess_fn(y);
    const double h = std::sqrt(std::sqrt(kEps)) * std::max(1.0, norm2(y));
    const std::size_t n = y.size();
    Mat hm(n, n);
    Vec yp = y, ym = y;
    for (std::size_t i = 0; i < n; ++i) {
        yp[i] = y[i] + h;
        ym[i] = y[i] - h;
        const Vec gp = gradient(yp);
        const Vec gm = gradient(ym);
        for (std::size_t j = 0; j < n; ++j) hm(i, j) = (gp[j] - gm[j]) / (2.0 * h);
        yp[i] = y[i];
        ym[i] = y[i];
    }
    // symmetrize away difference noise
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = 0.5 * (hm(i, j) + hm(j, i));
            hm(i, j) = s;
            hm(j, i) = s;
        }
    return hm;
}

NFunction make_power(double p, int dim) {
    if (p <= 1.0) throw std::invalid_argument("make_power: exponent must exceed 1");
    if (dim < 1) throw std::invalid_argument("make_power: dim must be positive");
    NFunction f;
    f.dim = dim;
    f.kind = NKind::Power;
    f.radial = true;
    f.p = p;
    f.value_fn = [p](const Vec& y) { return std::pow(norm2(y), p) / p; };
    f.grad_fn = [p](const Vec& y) {
        const double r = norm2(y);
        if (r == 0.0) return zeros(y.size());
        return scaled(y, std::pow(r, p - 2.0));
    };
    f.hess_fn = [p](const Vec& y) {
        const std::size_t n = y.size();
        const double r = norm2(y);
        Mat h(n, n);
        if (r == 0.0) {
            if (p == 2.0) return Mat::identity(n);
            if (p > 2.0) return h;                     // vanishing curvature
            for (auto& v : h.data) v = std::numeric_limits<double>::infinity();
            return h;
        }
        const double a = std::pow(r, p - 2.0);
        const double b = (p - 2.0) * std::pow(r, p - 4.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) h(i, j) = b * y[i] * y[j];
            h(i, i) += a;
        }
        return h;
    };
    return f;
}

NFunction make_pnorm(double p, int dim) {
    if (p <= 1.0) throw std::invalid_argument("make_pnorm: exponent must exceed 1");
    if (dim < 1) throw std::invalid_argument("make_pnorm: dim must be positive");
    NFunction f = make_power(p, dim);
    f.kind = NKind::PNorm;
    f.value_fn = [p](const Vec& y) { return std::pow(norm2(y), p); };
    f.grad_fn = [p](const Vec& y) {
        const double r = norm2(y);
        if (r == 0.0) return zeros(y.size());
        return scaled(y, p * std::pow(r, p - 2.0));
    };
    f.hess_fn = [p, inner = f.hess_fn](const Vec& y) {
        Mat h = inner(y);
        for (auto& v : h.data) v *= p;
        return h;
    };
    return f;
}

NFunction make_aniso(double p1, double p2, int d1, int d2) {
    if (p1 <= 1.0 || p2 <= 1.0)
        throw std::invalid_argument("make_aniso: exponents must exceed 1");
    if (d1 < 1 || d2 < 1) throw std::invalid_argument("make_aniso: block dims must be positive");
    NFunction f;
    f.dim = d1 + d2;
    f.kind = NKind::Aniso;
    f.radial = false;
    f.p1 = p1;
    f.p2 = p2;
    f.d1 = d1;
    f.d2 = d2;
    auto split_norms = [d1, d2](const Vec& y) {
        double r1 = 0.0, r2 = 0.0;
        for (int i = 0; i < d1; ++i) r1 += y[i] * y[i];
        for (int i = 0; i < d2; ++i) r2 += y[d1 + i] * y[d1 + i];
        return std::pair<double, double>(std::sqrt(r1), std::sqrt(r2));
    };
    f.value_fn = [p1, p2, split_norms](const Vec& y) {
        const auto [r1, r2] = split_norms(y);
        return std::pow(r1, p1) / p1 + std::pow(r2, p2) / p2;
    };
    f.grad_fn = [p1, p2, d1, d2, split_norms](const Vec& y) {
        const auto [r1, r2] = split_norms(y);
        Vec g(y.size(), 0.0);
        const double a1 = r1 > 0.0 ? std::pow(r1, p1 - 2.0) : 0.0;
        const double a2 = r2 > 0.0 ? std::pow(r2, p2 - 2.0) : 0.0;
        for (int i = 0; i < d1; ++i) g[i] = a1 * y[i];
        for (int i = 0; i < d2; ++i) g[d1 + i] = a2 * y[d1 + i];
        return g;
    };
    f.hess_fn = [p1, p2, d1, d2](const Vec& y) {
        const std::size_t n = y.size();
        Mat h(n, n);
        auto fill_block = [&](int off, int d, double p) {
            Vec yb(d);
            for (int i = 0; i < d; ++i) yb[i] = y[off + i];
            const double r = norm2(yb);
            if (r == 0.0) {
                if (p == 2.0)
                    for (int i = 0; i < d; ++i) h(off + i, off + i) = 1.0;
                return;
            }
            const double a = std::pow(r, p - 2.0);
            const double b = (p - 2.0) * std::pow(r, p - 4.0);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) h(off + i, off + j) = b * yb[i] * yb[j];
                h(off + i, off + i) += a;
            }
        };
        fill_block(0, d1, p1);
        fill_block(d1, d2, p2);
        return h;
    };
    return f;
}

NFunction make_exponential(int dim) {
    if (dim < 1) throw std::invalid_argument("make_exponential: dim must be positive");
    NFunction f;
    f.dim = dim;
    f.kind = NKind::Exponential;
    f.radial = true;
    f.value_fn = [](const Vec& y) { return std::expm1(dot(y, y)); };
    f.grad_fn = [](const Vec& y) { return scaled(y, 2.0 * std::exp(dot(y, y))); };
    f.hess_fn = [](const Vec& y) {
        const std::size_t n = y.size();
        const double e = std::exp(dot(y, y));
        Mat h(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) h(i, j) = 4.0 * e * y[i] * y[j];
            h(i, i) += 2.0 * e;
        }
        return h;
    };
    return f;
}

NFunction make_cosh(int dim) {
    if (dim < 1) throw std::invalid_argument("make_cosh: dim must be positive");
    NFunction f;
    f.dim = dim;
    f.kind = NKind::Cosh;
    f.radial = true;
    f.value_fn = [](const Vec& y) {
        const double r = norm2(y);
        return std::cosh(r) - 1.0;
    };
    f.grad_fn = [](const Vec& y) {
        const double r = norm2(y);
        const double s = r > 1e-8 ? std::sinh(r) / r : 1.0 + r * r / 6.0;
        return scaled(y, s);
    };
    f.hess_fn = [](const Vec& y) {
        const std::size_t n = y.size();
        const double r = norm2(y);
        Mat h(n, n);
        const double s = r > 1e-8 ? std::sinh(r) / r : 1.0 + r * r / 6.0;
        const double q = r > 1e-8 ? (std::cosh(r) - s) / (r * r) : 1.0 / 3.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) h(i, j) = q * y[i] * y[j];
            h(i, i) += s;
        }
        return h;
    };
    return f;
}

NFunction make_custom(int dim, std::function<double(const Vec&)> value,
                      std::function<Vec(const Vec&)> grad, bool radial) {
    if (dim < 1) throw std::invalid_argument("make_custom: dim must be positive");
    NFunction f;
    f.dim = dim;
    f.kind = NKind::Custom;
    f.radial = radial;
    f.value_fn = std::move(value);
    f.grad_fn = std::move(grad);
    return f;
}

NFunction compose_linear(const std::vector<std::pair<NFunction, Mat>>& parts, double rank_tol) {
    if (parts.empty()) throw std::invalid_argument("compose_linear: no parts");
    const std::size_t d = parts.front().second.cols;
    std::size_t total_rows = 0;
    for (const auto& [phi, map] : parts) {
        if (map.cols != d) throw std::invalid_argument("compose_linear: column count mismatch");
        if (static_cast<int>(map.rows) != phi.dim)
            throw std::invalid_argument("compose_linear: map rows must match part dim");
        total_rows += map.rows;
    }
    Mat stacked(total_rows, d);
    std::size_t row = 0;
    for (const auto& [phi, map] : parts) {
        for (std::size_t i = 0; i < map.rows; ++i)
            for (std::size_t j = 0; j < d; ++j) stacked(row + i, j) = map(i, j);
        row += map.rows;
    }
    if (numerical_rank(stacked, rank_tol) < d)
        throw KernelIntersectionNonTrivial(
            "compose_linear: stacked maps have a nontrivial common kernel");

    NFunction f;
    f.dim = static_cast<int>(d);
    f.kind = NKind::Composed;
    f.radial = false;
    f.parts.reserve(parts.size());
    for (const auto& [phi, map] : parts)
        f.parts.push_back({std::make_shared<NFunction>(phi), map});
    const auto held = f.parts;  // captured by value below
    f.value_fn = [held](const Vec& y) {
        double s = 0.0;
        for (const auto& part : held) s += (*part.phi)(matvec(part.map, y));
        return s;
    };
    f.grad_fn = [held, d](const Vec& y) {
        Vec g(d, 0.0);
        for (const auto& part : held) {
            const Vec inner = part.phi->gradient(matvec(part.map, y));
            const Vec back = matvec_transposed(part.map, inner);
            for (std::size_t i = 0; i < d; ++i) g[i] += back[i];
        }
        return g;
    };
    f.hess_fn = [held, d](const Vec& y) {
        Mat h(d, d);
        for (const auto& part : held) {
            const Mat hin = part.phi->hessian(matvec(part.map, y));
            // O^T H O
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    double s = 0.0;
                    for (std::size_t r = 0; r < part.map.rows; ++r)
                        for (std::size_t c = 0; c < part.map.rows; ++c)
                            s += part.map(r, i) * hin(r, c) * part.map(c, j);
                    h(i, j) += s;
                }
        }
        return h;
    };
    return f;
}

// ---------------------------------------------------------------------------

SamplingConfig SamplingConfig::defaults() {
    SamplingConfig cfg;
    cfg.radii = logspace(1e-2, 1e2, 25);
    return cfg;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                         static_cast<double>(n - 1)));
    return out;
}

namespace {

std::vector<Vec> direction_set(int dim, int randoms, std::uint64_t seed) {
    std::vector<Vec> dirs;
    for (int i = 0; i < dim; ++i) {
        Vec e(dim, 0.0);
        e[i] = 1.0;
        dirs.push_back(e);
    }
    if (dim > 1) {
        Vec diag(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
        dirs.push_back(diag);
    }
    Rng rng(seed);
    for (int i = 0; i < randoms; ++i) dirs.push_back(rng.unit_vec(dim));
    return dirs;
}

} // namespace

NInfinityReport check_n_infinity(const NFunction& phi, const SamplingConfig& cfg) {
    NInfinityReport rep;
    Rng rng(cfg.seed);
    const int d = phi.dim;

    const double f0 = phi(zeros(d));
    if (!(std::abs(f0) <= cfg.tol)) {
        rep.zero_at_zero.pass = false;
        rep.zero_at_zero.witness = zeros(d);
        rep.zero_at_zero.detail = "phi(0) = " + std::to_string(f0);
    }

    for (int i = 0; i < cfg.point_samples; ++i) {
        const Vec y = scaled(rng.unit_vec(d), cfg.sample_radius * std::pow(rng.uniform(), 2.0) +
                                                  1e-6);
        const double v = phi(y);
        if (rep.positivity.pass && !(v > 0.0)) {
            rep.positivity.pass = false;
            rep.positivity.witness = y;
            rep.positivity.detail = "phi(y) = " + std::to_string(v);
        }
        const double vm = phi(scaled(y, -1.0));
        const bool both_inf = std::isinf(v) && std::isinf(vm);
        if (rep.evenness.pass && !both_inf &&
            !(std::abs(v - vm) <= cfg.tol * (1.0 + std::abs(v)))) {
            rep.evenness.pass = false;
            rep.evenness.witness = y;
            rep.evenness.detail = "phi(y) != phi(-y)";
        }
    }

    for (int i = 0; i < cfg.segments; ++i) {
        const Vec x = rng.uniform_vec(d, -cfg.sample_radius, cfg.sample_radius);
        const Vec y = rng.uniform_vec(d, -cfg.sample_radius, cfg.sample_radius);
        const double fx = phi(x), fy = phi(y);
        const double rhs = 0.5 * (fx + fy);
        if (!std::isfinite(rhs)) continue;  // overflowed endpoints decide nothing
        Vec mid(d);
        for (int j = 0; j < d; ++j) mid[j] = 0.5 * (x[j] + y[j]);
        const double fm = phi(mid);
        if (!(fm <= rhs + cfg.tol * (1.0 + std::abs(rhs)))) {
            rep.convexity.pass = false;
            rep.convexity.witness = mid;
            rep.convexity.detail = "midpoint above chord";
            break;
        }
    }

    const auto dirs = direction_set(d, cfg.directions, cfg.seed + 1);
    for (const auto& e : dirs) {
        double first = -1.0, prev = -1.0;
        bool prev_inf = false;
        bool monotone = true;
        double last = 0.0;
        for (double r : cfg.radii) {
            const double ratio = phi(scaled(e, r)) / r;
            const bool is_inf = std::isinf(ratio);
            if (prev >= 0.0 || prev_inf) {
                if (prev_inf && !is_inf) monotone = false;
                if (!prev_inf && !is_inf && ratio < prev * (1.0 - 1e-9) - cfg.tol)
                    monotone = false;
            }
            if (first < 0.0 && std::isfinite(ratio)) first = ratio;
            prev = ratio;
            prev_inf = is_inf;
            last = ratio;
        }
        const double base = std::max(first, 1e-300);
        const bool grows = std::isinf(last) || last >= cfg.superlinear_factor * base;
        if (!(monotone && grows)) {
            rep.superlinearity.pass = false;
            rep.superlinearity.witness = e;
            rep.superlinearity.detail =
                monotone ? "ratio phi(Re)/R failed to grow" : "ratio phi(Re)/R decreased";
            break;
        }
    }
    return rep;
}

Delta2Config Delta2Config::defaults() {
    Delta2Config cfg;
    cfg.radii = logspace(1e-3, 1e3, 61);
    return cfg;
}

Delta2Report check_delta2(const NFunction& phi, const Delta2Config& cfg) {
    const auto dirs = direction_set(phi.dim, cfg.random_rays, cfg.seed);
    Delta2Report rep;
    rep.radius_sup.reserve(cfg.radii.size());

    double global_sup = -std::numeric_limits<double>::infinity();
    Vec sup_dir;
    double sup_radius = 0.0;

    for (double r : cfg.radii) {
        double s = -std::numeric_limits<double>::infinity();
        Vec s_dir;
        for (const auto& e : dirs) {
            const Vec x = scaled(e, r);
            const double f = phi(x);
            if (!(f > 0.0) || !std::isfinite(f)) continue;
            const double f2 = phi(scaled(x, 2.0));
            const double ratio = std::isinf(f2) ? f2 : (f2 - 1.0) / f;
            if (ratio > s) {
                s = ratio;
                s_dir = e;
            }
        }
        rep.radius_sup.push_back(s);
        if (s > global_sup) {
            global_sup = s;
            sup_dir = s_dir;
            sup_radius = r;
        }
    }

    // decide on the last two decades of the schedule
    const double r_hi = cfg.radii.back();
    std::size_t w0 = 0;
    while (w0 + 1 < cfg.radii.size() && cfg.radii[w0] < r_hi / 100.0) ++w0;
    bool window_inf = false;
    bool window_monotone = true;
    for (std::size_t i = w0; i < rep.radius_sup.size(); ++i) {
        if (std::isinf(rep.radius_sup[i]) || std::isnan(rep.radius_sup[i])) window_inf = true;
        if (i > w0 && rep.radius_sup[i] < rep.radius_sup[i - 1] * 0.95 - 1e-12)
            window_monotone = false;
    }
    const double s_lo = std::max(rep.radius_sup[w0], 1.0);
    const double s_hi = rep.radius_sup.back();

    if (window_inf || (s_hi >= cfg.diverging_factor * s_lo && window_monotone)) {
        rep.holds = false;
        rep.witness_ray = sup_dir;
        rep.witness_radius = sup_radius;
        return rep;
    }
    if (s_hi <= cfg.bounded_factor * s_lo) {
        rep.holds = true;
        rep.constant = std::max(global_sup, 0.0);
        rep.constant_safe = cfg.safety * rep.constant;
        return rep;
    }
    throw InconclusiveGrowth(
        "check_delta2: ratio neither bounded nor diverging; widen the radius schedule");
}

OrderConfig OrderConfig::defaults() {
    OrderConfig cfg;
    for (int e = -10; e <= 10; ++e) cfg.k_grid.push_back(std::pow(2.0, e));
    return cfg;
}

RayScan ray_sup_stable(const std::function<double(const Vec&)>& g, int dim,
                       const OrderConfig& cfg) {
    auto dirs = direction_set(dim, cfg.random_rays, cfg.seed);
    {
        const std::size_t base = dirs.size();
        for (std::size_t i = 0; i < base; ++i) dirs.push_back(scaled(dirs[i], -1.0));
    }

    RayScan out;
    out.sup = -std::numeric_limits<double>::infinity();
    Vec argmax_dir;
    bool saw_pos_inf = false;

    const double lo = 1e-3;
    const int decades = static_cast<int>(std::ceil(std::log10(cfg.r_cap / lo)));
    const int n = cfg.samples_per_decade * decades;
    for (int i = 0; i <= n; ++i) {
        const double r = lo * std::pow(cfg.r_cap / lo, static_cast<double>(i) /
                                                           static_cast<double>(n));
        for (const auto& e : dirs) {
            const Vec x = scaled(e, r);
            const double v = g(x);
            if (std::isinf(v) && v > 0.0) saw_pos_inf = true;  // left side overflowed
            if (!std::isfinite(v)) continue;
            if (v > out.sup) {
                out.sup = v;
                out.argmax_radius = r;
                out.argmax_x = x;
                argmax_dir = e;
            }
        }
    }

    // polish the sampled sup along its ray
    if (!argmax_dir.empty() && out.sup > -std::numeric_limits<double>::infinity()) {
        const double span = std::pow(10.0, 2.0 / cfg.samples_per_decade);
        double a = out.argmax_radius / span, b = out.argmax_radius * span;
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        auto eval = [&](double r) {
            const double v = g(scaled(argmax_dir, r));
            return std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
        };
        double fc = eval(c), fd = eval(d);
        for (int it = 0; it < 120; ++it) {
            if (fc > fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = eval(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = eval(d);
            }
        }
        const double best = std::max(fc, fd);
        if (best > out.sup) {
            out.sup = best;
            out.argmax_radius = fc > fd ? c : d;
            out.argmax_x = scaled(argmax_dir, out.argmax_radius);
        }
    }

    // stable: nothing overflowed upward, the max sits well inside the scanned
    // range, and the constant is not absurd
    out.stable = !saw_pos_inf && out.sup <= 1e100 && out.argmax_radius <= cfg.r_cap / 16.0;
    return out;
}

namespace {

// sup over sampled rays/radii of phi1(x) - phi2(k x).
OrderWitness scan_order_constant(const NFunction& phi1, const NFunction& phi2, double k,
                                 const OrderConfig& cfg, Vec* witness_out) {
    auto scan = ray_sup_stable(
        [&](const Vec& x) { return phi1(x) - phi2(scaled(x, k)); }, phi1.dim, cfg);
    OrderWitness w;
    w.k = k;
    w.stable = scan.stable;
    w.c = std::max(scan.sup, 0.0);
    w.argmax_radius = scan.argmax_radius;
    if (witness_out) *witness_out = scan.argmax_x;
    return w;
}

} // namespace

OrderVerdict check_order(const NFunction& phi1, const NFunction& phi2, OrderMode mode,
                         const OrderConfig& cfg) {
    if (phi1.dim != phi2.dim)
        throw std::invalid_argument("check_order: dimension mismatch");

    OrderVerdict verdict;
    if (mode == OrderMode::LlCurly) {
        verdict.holds = true;
        for (double k : cfg.k_grid) {
            Vec witness;
            auto w = scan_order_constant(phi1, phi2, k, cfg, &witness);
            verdict.per_k.push_back(w);
            if (!w.stable && verdict.holds) {
                verdict.holds = false;
                verdict.failing_k = k;
                verdict.fail_witness = witness;
            }
        }
        return verdict;
    }

    // strictif: one stable pair suffices; prefer the smallest constant, then
    // the smallest k.
    bool found = false;
    OrderWitness best;
    Vec last_witness;
    for (double k : cfg.k_grid) {
        Vec witness;
        auto w = scan_order_constant(phi1, phi2, k, cfg, &witness);
        verdict.per_k.push_back(w);
        if (w.stable) {
            if (!found || w.c < best.c - 1e-12) {
                best = w;
                found = true;
            }
        } else {
            last_witness = witness;
        }
    }
    verdict.holds = found;
    if (found) {
        verdict.chosen_k = best.k;
        verdict.chosen_c = best.c;
    } else {
        verdict.fail_witness = last_witness;
    }
    return verdict;
}

} // namespace orlicz
