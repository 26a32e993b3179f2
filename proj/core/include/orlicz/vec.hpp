#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace orlicz {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    if (m == 0.0 || !std::isfinite(m)) return m;
    if (m < 1e150 && m > 1e-150) return std::sqrt(dot(a, a));
    double s = 0.0;  // rescaled to dodge overflow at the double range edge
    for (double x : a) {
        const double q = x / m;
        s += q * q;
    }
    return m * std::sqrt(s);
}

inline double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

inline Vec scaled(const Vec& a, double s) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
    assert(a.size() == b.size());
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline void axpy(double alpha, const Vec& x, Vec& y) {
    assert(x.size() == y.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline Vec zeros(std::size_t n) { return Vec(n, 0.0); }

inline bool all_finite(const Vec& a) {
    for (double x : a)
        if (!std::isfinite(x)) return false;
    return true;
}

// Dense row-major matrix, small sizes only.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Vec matvec(const Mat& m, const Vec& x) {
    assert(x.size() == m.cols);
    Vec r(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[i] += m(i, j) * x[j];
    return r;
}

inline Vec matvec_transposed(const Mat& m, const Vec& x) {
    assert(x.size() == m.rows);
    Vec r(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r[j] += m(i, j) * x[i];
    return r;
}

// B = A^T A (cols x cols), used for numerical rank via eigenvalues.
inline Mat gram(const Mat& a) {
    Mat g(a.cols, a.cols);
    for (std::size_t i = 0; i < a.cols; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.rows; ++k) s += a(k, i) * a(k, j);
            g(i, j) = s;
        }
    return g;
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> symmetric_eigenvalues(Mat a);

/// Numerical rank: count of singular values above rel_tol * sigma_max.
std::size_t numerical_rank(const Mat& a, double rel_tol);

} // namespace orlicz
