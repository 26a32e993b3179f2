#include "orlicz/trig.hpp"

#include <cmath>
#include <stdexcept>

namespace orlicz {

Vec TrigPoly::eval(double t) const {
    const double w = 2.0 * M_PI / period;
    Vec out(dim(), 0.0);
    for (std::size_t k = 0; k < dim(); ++k) {
        double s = a0[k] / 2.0;
        for (std::size_t j = 0; j < a[k].size(); ++j) {
            const double ph = w * static_cast<double>(j + 1) * t;
            s += a[k][j] * std::cos(ph) + b[k][j] * std::sin(ph);
        }
        out[k] = s;
    }
    return out;
}

Vec TrigPoly::derivative(double t) const {
    const double w = 2.0 * M_PI / period;
    Vec out(dim(), 0.0);
    for (std::size_t k = 0; k < dim(); ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < a[k].size(); ++j) {
            const double f = w * static_cast<double>(j + 1);
            const double ph = f * t;
            s += -a[k][j] * f * std::sin(ph) + b[k][j] * f * std::cos(ph);
        }
        out[k] = s;
    }
    return out;
}

Vec TrigPoly::second_derivative(double t) const {
    const double w = 2.0 * M_PI / period;
    Vec out(dim(), 0.0);
    for (std::size_t k = 0; k < dim(); ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < a[k].size(); ++j) {
            const double f = w * static_cast<double>(j + 1);
            const double ph = f * t;
            s += -f * f * (a[k][j] * std::cos(ph) + b[k][j] * std::sin(ph));
        }
        out[k] = s;
    }
    return out;
}

TrigPoly TrigPoly::differentiated() const {
    TrigPoly d;
    d.period = period;
    d.a0.assign(dim(), 0.0);
    d.a.resize(dim());
    d.b.resize(dim());
    const double w = 2.0 * M_PI / period;
    for (std::size_t k = 0; k < dim(); ++k) {
        const std::size_t kk = a[k].size();
        d.a[k].resize(kk);
        d.b[k].resize(kk);
        for (std::size_t j = 0; j < kk; ++j) {
            const double f = w * static_cast<double>(j + 1);
            d.a[k][j] = f * b[k][j];
            d.b[k][j] = -f * a[k][j];
        }
    }
    return d;
}

TrigPoly TrigPoly::from_samples(const std::vector<double>& samples, std::size_t n,
                                std::size_t dim, double period) {
    if (n < 2 || samples.size() != n * dim)
        throw std::invalid_argument("TrigPoly::from_samples: bad sample layout");
    TrigPoly p;
    p.period = period;
    p.a0.assign(dim, 0.0);
    const std::size_t kmax = n / 2;  // Nyquist included, sine part dropped there
    p.a.assign(dim, std::vector<double>(kmax, 0.0));
    p.b.assign(dim, std::vector<double>(kmax, 0.0));
    for (std::size_t k = 0; k < dim; ++k) {
        double s0 = 0.0;
        for (std::size_t i = 0; i < n; ++i) s0 += samples[i * dim + k];
        p.a0[k] = 2.0 * s0 / static_cast<double>(n);
        for (std::size_t j = 1; j <= kmax; ++j) {
            double ca = 0.0, cb = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double ph = 2.0 * M_PI * static_cast<double>(j) *
                                  static_cast<double>(i) / static_cast<double>(n);
                ca += samples[i * dim + k] * std::cos(ph);
                cb += samples[i * dim + k] * std::sin(ph);
            }
            double fa = 2.0 * ca / static_cast<double>(n);
            double fb = 2.0 * cb / static_cast<double>(n);
            if (2 * j == n) {
                fa *= 0.5;  // shared Nyquist mode
                fb = 0.0;
            }
            p.a[k][j - 1] = fa;
            p.b[k][j - 1] = fb;
        }
    }
    return p;
}

double TrigPoly::tail_energy_fraction() const {
    double total = 0.0, tail = 0.0;
    const std::size_t kk = harmonics();
    const std::size_t cut = kk - kk / 4;
    for (std::size_t k = 0; k < dim(); ++k) {
        for (std::size_t j = 0; j < kk; ++j) {
            const double e = a[k][j] * a[k][j] + b[k][j] * b[k][j];
            total += e;
            if (j + 1 > cut) tail += e;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

} // namespace orlicz
