#include "orlicz/vec.hpp"

#include <algorithm>
#include <cmath>

namespace orlicz {

std::vector<double> symmetric_eigenvalues(Mat a) {
    const std::size_t n = a.rows;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

std::size_t numerical_rank(const Mat& a, double rel_tol) {
    const auto ev = symmetric_eigenvalues(gram(a));
    double lmax = 0.0;
    for (double l : ev) lmax = std::max(lmax, l);
    if (lmax <= 0.0) return 0;
    const double cut = rel_tol * rel_tol * lmax;
    std::size_t r = 0;
    for (double l : ev)
        if (l > cut) ++r;
    return r;
}

} // namespace orlicz
