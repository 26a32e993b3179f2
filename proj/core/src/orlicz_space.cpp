#include "orlicz/orlicz_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orlicz/errors.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

ModularValue modular(const NFunction& phi, const Trajectory& u) {
    if (phi.dim != u.dim) throw std::invalid_argument("modular: dimension mismatch");
    ModularValue m;
    const double w = u.period / static_cast<double>(u.n);
    for (std::size_t i = 0; i < u.n; ++i) {
        const double v = phi(u.node(i));
        if (!std::isfinite(v)) m.overflowed = true;
        m.value += w * v;
    }
    if (!std::isfinite(m.value)) m.overflowed = true;
    return m;
}

namespace {

double modular_scaled(const NFunction& phi, const Trajectory& u, double lambda) {
    const double w = u.period / static_cast<double>(u.n);
    double s = 0.0;
    for (std::size_t i = 0; i < u.n; ++i) {
        Vec y = u.node(i);
        for (auto& x : y) x /= lambda;
        s += w * phi(y);
        if (std::isinf(s)) return s;
    }
    return s;
}

} // namespace

double luxemburg_norm(const NFunction& phi, const Trajectory& u, const LuxemburgConfig& cfg) {
    if (phi.dim != u.dim) throw std::invalid_argument("luxemburg_norm: dimension mismatch");
    if (!u.finite()) throw BracketFailure("luxemburg_norm: non-finite trajectory data");
    bool zero = true;
    for (double v : u.values)
        if (v != 0.0) {
            zero = false;
            break;
        }
    if (zero) return 0.0;

    double lo = 0.0, hi = 0.0;
    double lambda = 1.0;
    double rho = modular_scaled(phi, u, lambda);
    if (rho > 1.0) {
        int k = 0;
        while (rho > 1.0) {
            lo = lambda;
            lambda *= 2.0;
            rho = modular_scaled(phi, u, lambda);
            if (++k > cfg.max_doublings)
                throw BracketFailure("luxemburg_norm: cannot bracket the unit modular level");
        }
        hi = lambda;
    } else {
        int k = 0;
        hi = lambda;
        while (rho <= 1.0) {
            hi = lambda;
            lambda *= 0.5;
            rho = modular_scaled(phi, u, lambda);
            if (++k > cfg.max_doublings)
                throw BracketFailure("luxemburg_norm: modular stays below 1 for nonzero data");
        }
        lo = lambda;
    }

    for (int it = 0; it < cfg.max_iter && (hi - lo) > cfg.rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (modular_scaled(phi, u, mid) <= 1.0)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

bool amemiya_check(const NFunction& phi, const Trajectory& u, const LuxemburgConfig& cfg) {
    const double lhs = luxemburg_norm(phi, u, cfg);
    const auto rho = modular(phi, u);
    if (rho.overflowed) return true;  // right side beyond float range
    return lhs <= rho.value + 1.0 + 1e-9 * (1.0 + rho.value);
}

bool holder_check(const NFunction& phi, const Trajectory& u, const Trajectory& v,
                  const ConjugateConfig& ccfg, const LuxemburgConfig& lcfg) {
    if (u.n != v.n || u.dim != v.dim || u.period != v.period)
        throw std::invalid_argument("holder_check: trajectories must share the grid");
    const double w = u.period / static_cast<double>(u.n);
    double pairing = 0.0;
    for (std::size_t i = 0; i < u.n; ++i) pairing += w * dot(u.node(i), v.node(i));

    const double nu = luxemburg_norm(phi, u, lcfg);
    const auto star = conjugate(phi, ccfg).to_nfunction();
    const double nv = luxemburg_norm(star, v, lcfg);
    return pairing <= 2.0 * nu * nv + 1e-8 * (1.0 + 2.0 * nu * nv);
}

namespace {

InequalityReport suite_impl(const NFunction& phi, const Trajectory& u,
                            const RadialProfile& profile, const InequalityConfig& cfg) {
    InequalityReport rep;
    const std::size_t n = u.n;
    const double period = u.period;
    const double h = period / static_cast<double>(n);

    const Trajectory du = derivative(u);
    LuxemburgConfig lcfg;
    const double norm_du = luxemburg_norm(phi, du, lcfg);
    const double norm_u = luxemburg_norm(phi, u, lcfg);
    const auto [mean, tilde] = mean_decompose(u);

    auto inv = [&](double v) {
        try {
            return radial_minorant_inverse(profile, v);
        } catch (const OutOfRange&) {
            throw ProfileRangeExceeded(
                "inequality_suite: profile does not cover the required inverse range");
        }
    };

    // pointwise continuity modulus over node pairs
    {
        std::vector<double> gap_factor(n, 0.0);  // |s-t| A^{-1}(1/|s-t|) per node gap
        for (std::size_t k = 1; k < n; ++k) {
            const double gap = static_cast<double>(k) * h;
            gap_factor[k] = gap * inv(1.0 / gap);
        }
        double min_slack = std::numeric_limits<double>::infinity();
        auto consider = [&](std::size_t i, std::size_t j) {
            if (i == j) return;
            if (i > j) std::swap(i, j);
            const double lhs = norm2(sub(u.node(i), u.node(j)));
            const double slack = gap_factor[j - i] * norm_du - lhs;
            min_slack = std::min(min_slack, slack);
        };
        if (n <= cfg.morrey_all_pairs_max) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) consider(i, j);
        } else {
            Rng rng(cfg.seed);
            for (int k = 0; k < cfg.morrey_random_pairs; ++k)
                consider(static_cast<std::size_t>(rng.uniform() * n),
                         static_cast<std::size_t>(rng.uniform() * n));
        }
        rep.morrey.min_slack = min_slack;
        rep.morrey.pass = min_slack >= -cfg.tol;
    }

    // sup-norm bound through the full space norm
    {
        double sup = 0.0;
        for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, norm2(u.node(i)));
        const double rhs = inv(1.0 / period) * std::max(1.0, period) * (norm_u + norm_du);
        rep.sobolev.min_slack = rhs - sup;
        rep.sobolev.pass = rep.sobolev.min_slack >= -cfg.tol;
    }

    // mean-free sup-norm bound
    {
        double sup = 0.0;
        for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, norm2(tilde.node(i)));
        const double rhs = period * inv(1.0 / period) * norm_du;
        rep.pw.min_slack = rhs - sup;
        rep.pw.pass = rep.pw.min_slack >= -cfg.tol;
    }

    // modular mean-free bound, exact on the discrete grid
    {
        double rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            rhs += phi(scaled(du.node(i), period)) / static_cast<double>(n);
        double max_lhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) max_lhs = std::max(max_lhs, phi(tilde.node(i)));
        rep.aniso_pw.min_slack = rhs - max_lhs;  // +inf rhs passes trivially
        rep.aniso_pw.pass = !(rep.aniso_pw.min_slack < -cfg.tol);
    }
    return rep;
}

} // namespace

InequalityReport inequality_suite(const NFunction& phi, const Trajectory& u,
                                  const RadialProfile& profile, const InequalityConfig& cfg) {
    if (phi.dim != u.dim) throw std::invalid_argument("inequality_suite: dimension mismatch");
    return suite_impl(phi, u, profile, cfg);
}

InequalityReport inequality_suite(const NFunction& phi, const Trajectory& u,
                                  const InequalityConfig& cfg) {
    if (phi.dim != u.dim) throw std::invalid_argument("inequality_suite: dimension mismatch");
    const double need =
        std::max(static_cast<double>(u.n) / u.period, 1.0 / u.period) * 1.05 + 1.0;
    const auto profile = radial_minorant_covering(phi, need, cfg.profile_knots);
    return suite_impl(phi, u, profile, cfg);
}

DistToBoundedReport dist_to_bounded(const NFunction& phi, const Trajectory& u,
                                    std::vector<double> levels, const LuxemburgConfig& cfg) {
    const Trajectory du = derivative(u);
    double max_mag = 0.0;
    for (std::size_t i = 0; i < du.n; ++i) max_mag = std::max(max_mag, norm2(du.node(i)));

    if (levels.empty()) {
        levels.push_back(0.0);
        if (max_mag > 0.0) {
            const double lo = std::max(max_mag * 1e-3, 1e-12);
            for (double k : logspace(lo, max_mag, 23)) levels.push_back(k);
            levels.back() = max_mag;  // land exactly on the clamp-free level
        }
    }
    std::sort(levels.begin(), levels.end());

    DistToBoundedReport rep;
    rep.levels = levels;
    rep.min_distance = std::numeric_limits<double>::infinity();
    for (double k : levels) {
        Trajectory excess = du;
        for (std::size_t i = 0; i < du.n; ++i) {
            Vec v = du.node(i);
            const double mag = norm2(v);
            const double keep = mag > k && mag > 0.0 ? k / mag : 1.0;
            for (auto& x : v) x *= (1.0 - keep);
            excess.set_node(i, v);
        }
        const double dist = luxemburg_norm(phi, excess, cfg);
        rep.distances.push_back(dist);
        if (dist < rep.min_distance - 1e-15) {
            rep.min_distance = dist;
            rep.minimizing_level = k;
        }
    }
    return rep;
}

} // namespace orlicz
