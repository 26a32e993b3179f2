#include <doctest.h>

#include <cmath>
#include <sstream>

#include "orlicz/errors.hpp"
#include "orlicz/orlicz_space.hpp"
#include "orlicz/rng.hpp"
#include "support/oracles.hpp"

using namespace orlicz;

namespace {

Trajectory sine_path(double period, std::size_t n, double amplitude = 1.0) {
    return Trajectory::from_function(period, n, 1, [&](double t) {
        return Vec{amplitude * std::sin(2.0 * M_PI * t / period)};
    });
}

} // namespace

TEST_CASE("derivative of grid paths") {
    SUBCASE("constants have zero derivative") {
        auto u = Trajectory::zero(1.0, 16, 2);
        for (std::size_t i = 0; i < u.n; ++i) u.set_node(i, {3.0, -1.0});
        const auto du = derivative(u);
        CHECK(du.tag == DerivKind::Staggered);
        for (double v : du.values) CHECK(v == 0.0);
    }
    SUBCASE("sine derivative matches the midpoint cosine") {
        const std::size_t n = 256;
        const auto u = sine_path(1.0, n);
        const auto du = derivative(u);
        const double h = 1.0 / static_cast<double>(n);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double tmid = u.t(i) + 0.5 * h;
            worst = std::max(worst,
                             std::abs(du.node(i)[0] - 2.0 * M_PI * std::cos(2.0 * M_PI * tmid)));
        }
        CHECK(worst < 1e-3);
    }
    SUBCASE("non-periodic data wraps into one large entry") {
        const std::size_t n = 16;
        const auto u = Trajectory::from_function(1.0, n, 1, [](double t) { return Vec{t}; });
        const auto du = derivative(u);
        for (std::size_t i = 0; i + 1 < n; ++i) CHECK(du.node(i)[0] == doctest::Approx(1.0));
        CHECK(du.node(n - 1)[0] == doctest::Approx(1.0 - static_cast<double>(n)));
    }
}

TEST_CASE("modular values") {
    const auto phi = make_power(2.0, 1);
    SUBCASE("ramp path approaches the closed-form integral") {
        const std::size_t n = 8192;
        const auto u = Trajectory::from_function(1.0, n, 1, [](double t) { return Vec{t}; });
        CHECK(modular(phi, u).value == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
    }
    SUBCASE("zero path has zero modular") {
        CHECK(modular(phi, Trajectory::zero(1.0, 16, 1)).value == 0.0);
    }
    SUBCASE("exponential of a sine against a high-resolution oracle") {
        const auto expphi = make_exponential(1);
        const auto u = sine_path(1.0, 4096);
        const double oracle = oracles::quad_midpoint(
            [](double t) {
                const double s = std::sin(2.0 * M_PI * t);
                return std::exp(s * s) - 1.0;
            },
            1.0, 1 << 16);
        CHECK(modular(expphi, u).value == doctest::Approx(oracle).epsilon(1e-5));
        // frozen from the quadrature oracle: e^{1/2} I_0(1/2) - 1
        CHECK(oracle == doctest::Approx(0.75338765437709).epsilon(1e-8));
    }
    SUBCASE("overflow is flagged, not thrown") {
        const auto expphi = make_exponential(1);
        auto u = Trajectory::zero(1.0, 8, 1);
        u.set_node(3, {40.0});
        const auto m = modular(expphi, u);
        CHECK(m.overflowed);
    }
}

TEST_CASE("luxemburg norm") {
    const auto phi = make_power(2.0, 1);
    SUBCASE("constant path solves the scaling equation") {
        auto u = Trajectory::zero(1.0, 64, 1);
        for (std::size_t i = 0; i < u.n; ++i) u.set_node(i, {1.0});
        CHECK(luxemburg_norm(phi, u) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
    }
    SUBCASE("zero path has zero norm") {
        CHECK(luxemburg_norm(phi, Trajectory::zero(1.0, 16, 1)) == 0.0);
    }
    SUBCASE("homogeneity and triangle inequality on random paths") {
        Rng rng(3);
        for (int i = 0; i < 40; ++i) {
            const auto u = random_bandlimited(1.0, 64, 1, 3, 0.5, 100 + i);
            const auto v = random_bandlimited(1.0, 64, 1, 3, 0.5, 200 + i);
            const double nu = luxemburg_norm(phi, u);
            auto u2 = u;
            for (auto& x : u2.values) x *= 2.0;
            CHECK(luxemburg_norm(phi, u2) == doctest::Approx(2.0 * nu).epsilon(1e-8));
            auto sum = u;
            for (std::size_t k = 0; k < sum.values.size(); ++k) sum.values[k] += v.values[k];
            CHECK(luxemburg_norm(phi, sum) <=
                  nu + luxemburg_norm(phi, v) + 1e-8 * (1.0 + nu));
        }
    }
    SUBCASE("unit ball characterization and modular-level inclusion") {
        Rng rng(5);
        for (int i = 0; i < 60; ++i) {
            const auto u = random_bandlimited(1.0, 64, 1, 3, rng.uniform(0.05, 1.5), 300 + i);
            const double norm = luxemburg_norm(phi, u);
            const double rho = modular(phi, u).value;
            if (norm <= 1.0) CHECK(rho <= 1.0 + 1e-7);
            if (rho <= 1.0) CHECK(norm <= 1.0 + 1e-7);
            // if modular(u/r) <= 1 then the norm is at most r
            const double r = rng.uniform(0.5, 3.0);
            auto ur = u;
            for (auto& x : ur.values) x /= r;
            if (modular(phi, ur).value <= 1.0) CHECK(norm <= r * (1.0 + 1e-8));
        }
    }
    SUBCASE("non-finite data raises BracketFailure") {
        auto u = Trajectory::zero(1.0, 8, 1);
        u.set_node(2, {std::numeric_limits<double>::quiet_NaN()});
        CHECK_THROWS_AS(luxemburg_norm(phi, u), BracketFailure);
    }
}

TEST_CASE("amemiya bound") {
    const auto phi = make_power(2.0, 1);
    CHECK(amemiya_check(phi, Trajectory::zero(1.0, 16, 1)));
    auto u = Trajectory::zero(1.0, 64, 1);
    for (std::size_t i = 0; i < u.n; ++i) u.set_node(i, {1.0});
    CHECK(amemiya_check(phi, u));  // 0.7071 <= 0.5 + 1
    for (int i = 0; i < 1000; ++i)
        CHECK(amemiya_check(phi, random_bandlimited(1.0, 48, 1, 3, 0.6, 1000 + i)));
}

TEST_CASE("hoelder pairing bound") {
    const auto phi = make_power(2.0, 1);
    SUBCASE("zero partner collapses both sides") {
        const auto u = sine_path(1.0, 32);
        CHECK(holder_check(phi, u, Trajectory::zero(1.0, 32, 1)));
    }
    SUBCASE("self-pairing of the constant path is tight") {
        auto u = Trajectory::zero(1.0, 32, 1);
        for (std::size_t i = 0; i < u.n; ++i) u.set_node(i, {1.0});
        CHECK(holder_check(phi, u, u));  // 1 <= 2 (1/sqrt2)^2
    }
    SUBCASE("random pairs across conjugate spaces") {
        for (int i = 0; i < 300; ++i) {
            const auto u = random_bandlimited(1.0, 48, 1, 3, 0.5, 2000 + i);
            const auto v = random_bandlimited(1.0, 48, 1, 3, 0.5, 3000 + i);
            CHECK(holder_check(phi, u, v));
        }
    }
}

TEST_CASE("mean decomposition") {
    SUBCASE("constants split into themselves and zero") {
        auto u = Trajectory::zero(1.0, 16, 2);
        for (std::size_t i = 0; i < u.n; ++i) u.set_node(i, {2.0, -3.0});
        const auto [mean, tilde] = mean_decompose(u);
        CHECK(mean[0] == doctest::Approx(2.0));
        CHECK(mean[1] == doctest::Approx(-3.0));
        for (double v : tilde.values) CHECK(std::abs(v) < 1e-14);
    }
    SUBCASE("sine has zero mean on the periodic grid") {
        const auto [mean, tilde] = mean_decompose(sine_path(1.0, 128));
        CHECK(std::abs(mean[0]) < 1e-14);
    }
    SUBCASE("shifted sine splits linearly") {
        const auto u = Trajectory::from_function(
            1.0, 128, 1, [](double t) { return Vec{1.0 + std::sin(2.0 * M_PI * t)}; });
        const auto [mean, tilde] = mean_decompose(u);
        CHECK(mean[0] == doctest::Approx(1.0).epsilon(1e-12));
        const auto s = sine_path(1.0, 128);
        for (std::size_t i = 0; i < u.n; ++i)
            CHECK(tilde.node(i)[0] == doctest::Approx(s.node(i)[0]).scale(1.0));
        // the remainder has negligible quadrature mean
        const auto [m2, t2] = mean_decompose(tilde);
        CHECK(std::abs(m2[0]) < 1e-12);
    }
}

TEST_CASE("embedding inequality suite") {
    SUBCASE("constants zero out the oscillation-driven bounds") {
        auto u = Trajectory::zero(1.0, 64, 1);
        for (std::size_t i = 0; i < u.n; ++i) u.set_node(i, {2.5});
        const auto rep = inequality_suite(make_power(2.0, 1), u);
        CHECK(rep.morrey.pass);
        CHECK(rep.morrey.min_slack >= 0.0);
        CHECK(rep.pw.pass);
        CHECK(rep.aniso_pw.pass);
        // the sup-norm bound is exactly tight on constants, so it only holds
        // up to the piecewise-linear resolution of the profile inverse
        CHECK(rep.sobolev.min_slack >= -1e-2 * norm2(u.node(0)));
    }
    SUBCASE("sine path under the quadratic") {
        const auto rep = inequality_suite(make_power(2.0, 1), sine_path(1.0, 256));
        CHECK(rep.all_pass());
        CHECK(rep.morrey.min_slack >= 0.0);
        CHECK(rep.aniso_pw.min_slack >= 0.0);
    }
    SUBCASE("random sweep across the three families") {
        struct FamilyCase {
            NFunction phi;
            double sigma;
        };
        const FamilyCase cases[] = {{make_power(2.0, 2), 0.4},
                                    {make_aniso(2.0, 4.0, 1, 1), 0.4},
                                    {make_exponential(2), 0.15}};
        for (const auto& fc : cases) {
            const std::size_t n = 128;
            const double need = static_cast<double>(n) * 1.05 + 1.0;
            const auto profile = radial_minorant_covering(fc.phi, need, 128);
            for (int i = 0; i < 120; ++i) {
                const auto u = random_bandlimited(1.0, n, 2, 3, fc.sigma, 4000 + i);
                const auto rep = inequality_suite(fc.phi, u, profile);
                CHECK(rep.all_pass());
            }
        }
    }
    SUBCASE("mean-free modular bound is tight-capable") {
        // slow triangle-like oscillation under a mild power keeps the right
        // side within a small multiple of the peak left side
        const auto phi = make_power(1.5, 1);
        TrigPoly tri;
        tri.period = 1.0;
        tri.a0 = {0.0};
        tri.a = {{0.0, 0.0, 0.0, 0.0, 0.0}};
        tri.b = {{0.0, 0.0, 0.0, 0.0, 0.0}};
        // truncated Fourier series of the unit triangle wave, amplitude 5
        const double scale = 5.0 * 8.0 / (M_PI * M_PI);
        tri.b[0][0] = scale;
        tri.b[0][2] = -scale / 9.0;
        tri.b[0][4] = scale / 25.0;
        const auto u = Trajectory::from_trig(tri, 128);
        const auto rep = inequality_suite(phi, u);
        CHECK(rep.all_pass());
        double max_lhs = 0.0;
        const auto [mean, tilde] = mean_decompose(u);
        for (std::size_t i = 0; i < u.n; ++i)
            max_lhs = std::max(max_lhs, phi(tilde.node(i)));
        CHECK(rep.aniso_pw.min_slack < 10.0 * max_lhs);
    }
}

TEST_CASE("distance to bounded paths") {
    const auto phi = make_power(2.0, 1);
    SUBCASE("smooth paths reach zero at the derivative peak") {
        const auto rep = dist_to_bounded(phi, sine_path(1.0, 128));
        CHECK(rep.min_distance == 0.0);
        CHECK(rep.minimizing_level <= 2.0 * M_PI * (1.0 + 1e-2));
        for (std::size_t i = 1; i < rep.distances.size(); ++i)
            CHECK(rep.distances[i] <= rep.distances[i - 1] + 1e-12);
    }
    SUBCASE("zero path is already bounded") {
        const auto rep = dist_to_bounded(phi, Trajectory::zero(1.0, 16, 1));
        CHECK(rep.min_distance == 0.0);
        CHECK(rep.minimizing_level == 0.0);
    }
    SUBCASE("a spike shows up as a plateau then a drop") {
        auto u = Trajectory::zero(1.0, 128, 1);
        u.set_node(64, {1000.0 / 128.0});  // derivative spike of height ~1000
        const auto rep = dist_to_bounded(phi, u);
        const double spike = 1000.0;
        double before = 0.0, after = 0.0;
        for (std::size_t i = 0; i < rep.levels.size(); ++i) {
            if (rep.levels[i] < 0.5 * spike) before = rep.distances[i];
            if (rep.levels[i] >= spike) after = rep.distances[i];
        }
        CHECK(before > 0.0);
        CHECK(after == 0.0);
    }
}

TEST_CASE("csv round trip") {
    const auto u = random_bandlimited(2.0, 32, 3, 2, 0.7, 99);
    const std::string text = to_csv(u);
    std::istringstream is(text);
    const auto back = read_csv(is);
    CHECK(back.n == u.n);
    CHECK(back.dim == u.dim);
    CHECK(back.period == doctest::Approx(u.period).epsilon(1e-12));
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(back.values[i] == doctest::Approx(u.values[i]).epsilon(1e-14));
}
