#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "orlicz/vec.hpp"

namespace orlicz {

// Deterministic RNG wrapper. Distribution code is hand-rolled so that a
// fixed seed yields identical draws under any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53-bit mantissa in [0,1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::uint64_t next_uint() { return engine_(); }

    Vec uniform_vec(std::size_t d, double lo, double hi) {
        Vec v(d);
        for (auto& x : v) x = uniform(lo, hi);
        return v;
    }

    Vec unit_vec(std::size_t d) {
        Vec v(d);
        double n = 0.0;
        do {
            for (auto& x : v) x = normal();
            n = norm2(v);
        } while (n < 1e-12);
        for (auto& x : v) x /= n;
        return v;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace orlicz
