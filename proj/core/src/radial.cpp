#include "orlicz/radial.hpp"

#include <algorithm>
#include <cmath>

#include "orlicz/errors.hpp"
#include "orlicz/rng.hpp"

namespace orlicz {

double RadialProfile::eval(double r) const {
    if (r < 0.0 || r > knots.back() * (1.0 + 1e-12))
        throw OutOfRange("RadialProfile::eval: r outside tabulated range");
    r = std::min(r, knots.back());
    const auto it = std::upper_bound(knots.begin(), knots.end(), r);
    if (it == knots.begin()) return values.front();
    const std::size_t hi = std::min<std::size_t>(it - knots.begin(), knots.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (r - knots[lo]) / (knots[hi] - knots[lo]);
    return values[lo] + t * (values[hi] - values[lo]);
}

namespace {

// Orthonormal basis of the tangent space at unit vector u (Gram-Schmidt
// against the coordinate axes).
std::vector<Vec> tangent_basis(const Vec& u) {
    const std::size_t d = u.size();
    std::vector<Vec> basis;
    for (std::size_t i = 0; i < d && basis.size() + 1 < d; ++i) {
        Vec v(d, 0.0);
        v[i] = 1.0;
        axpy(-dot(v, u), u, v);
        for (const auto& b : basis) axpy(-dot(v, b), b, v);
        const double n = norm2(v);
        if (n > 1e-8) {
            for (auto& x : v) x /= n;
            basis.push_back(v);
        }
    }
    return basis;
}

Vec renormalized(Vec v) {
    const double n = norm2(v);
    for (auto& x : v) x /= n;
    return v;
}

} // namespace

double sphere_infimum(const NFunction& phi, double r, const SphereMinConfig& cfg) {
    const int d = phi.dim;
    if (r == 0.0) return phi(zeros(d));
    if (d == 1) return phi({r});  // two-point sphere, phi even

    Rng rng(cfg.seed);
    Vec best_dir;
    double best = std::numeric_limits<double>::infinity();
    const int coarse = cfg.samples_per_dim * d;
    for (int i = 0; i < coarse; ++i) {
        Vec e;
        if (i < 2 * d) {
            e = zeros(d);
            e[i / 2] = (i % 2 == 0) ? 1.0 : -1.0;
        } else if (d == 2 && i < 2 * d + coarse / 2) {
            const double th = 2.0 * M_PI * static_cast<double>(i - 2 * d) /
                              static_cast<double>(coarse / 2);
            e = {std::cos(th), std::sin(th)};
        } else {
            e = rng.unit_vec(d);
        }
        const double v = phi(scaled(e, r));
        if (v < best) {
            best = v;
            best_dir = e;
        }
    }

    double step = cfg.refine_step;
    bool settled = false;
    for (int round = 0; round < cfg.refine_rounds; ++round) {
        const double before = best;
        bool improved = false;
        for (const auto& tdir : tangent_basis(best_dir)) {
            for (double sgn : {1.0, -1.0}) {
                Vec cand = best_dir;
                axpy(sgn * step, tdir, cand);
                cand = renormalized(cand);
                const double v = phi(scaled(cand, r));
                if (v < best) {
                    best = v;
                    best_dir = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
        if (std::abs(before - best) <= cfg.stab_tol * (1.0 + std::abs(best)) && step < 1e-8) {
            settled = true;
            break;
        }
    }
    if (!settled && step >= 1e-4)
        throw SphereMinimizationFailed("sphere_infimum: angular refinement did not stabilize");
    return best;
}

RadialProfile radial_minorant(const NFunction& phi, double r_max, int m,
                              const SphereMinConfig& cfg) {
    if (!(r_max > 0.0)) throw std::invalid_argument("radial_minorant: r_max must be positive");
    if (m < 8) throw std::invalid_argument("radial_minorant: need at least 8 knots");

    std::vector<double> knots(m + 1), samples(m + 1);
    for (int i = 0; i <= m; ++i) {
        knots[i] = r_max * static_cast<double>(i) / static_cast<double>(m);
        samples[i] = i == 0 ? 0.0 : sphere_infimum(phi, knots[i], cfg);
    }

    // Andrew-style lower hull of (knot, sample) pairs.
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            const double cross = (knots[b] - knots[a]) * (samples[i] - samples[a]) -
                                 (samples[b] - samples[a]) * (knots[i] - knots[a]);
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }

    RadialProfile prof;
    prof.knots = knots;
    prof.values.assign(m + 1, 0.0);
    std::size_t seg = 0;
    for (int i = 0; i <= m; ++i) {
        while (seg + 1 < hull.size() && knots[hull[seg + 1]] <= knots[i]) ++seg;
        if (seg + 1 >= hull.size()) {
            prof.values[i] = samples[hull.back()];
            continue;
        }
        const std::size_t a = hull[seg], b = hull[seg + 1];
        const double t = (knots[i] - knots[a]) / (knots[b] - knots[a]);
        prof.values[i] = samples[a] + t * (samples[b] - samples[a]);
    }

    // clamp to a nondecreasing-slope, nonnegative-slope profile from A(0)=0
    prof.values[0] = 0.0;
    double prev_slope = 0.0;
    for (int i = 1; i <= m; ++i) {
        const double dr = prof.knots[i] - prof.knots[i - 1];
        double slope = (prof.values[i] - prof.values[i - 1]) / dr;
        slope = std::max({slope, prev_slope, 0.0});
        prof.values[i] = prof.values[i - 1] + slope * dr;
        prev_slope = slope;
    }
    return prof;
}

double radial_minorant_inverse(const RadialProfile& a, double v) {
    if (v < 0.0) throw OutOfRange("radial_minorant_inverse: negative value");
    if (v == 0.0) return 0.0;
    if (v > a.value_max() * (1.0 + 1e-12))
        throw OutOfRange("radial_minorant_inverse: value beyond profile range");
    double lo = 0.0, hi = a.r_max();
    // smallest r with A(r) >= v; A continuous nondecreasing
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * a.r_max(); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (a.eval(mid) >= v)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

RadialProfile radial_minorant_covering(const NFunction& phi, double value_needed, int m,
                                       const SphereMinConfig& cfg) {
    double r_max = 1.0;
    for (int i = 0; i < 200; ++i) {
        if (sphere_infimum(phi, r_max, cfg) >= value_needed * 1.05) break;
        r_max *= 2.0;
    }
    return radial_minorant(phi, r_max, m, cfg);
}

} // namespace orlicz
