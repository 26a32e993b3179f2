#include <doctest.h>

#include <cmath>

#include "orlicz/errors.hpp"
#include "orlicz/nfunction.hpp"
#include "orlicz/radial.hpp"
#include "orlicz/rng.hpp"
#include "support/oracles.hpp"

using namespace orlicz;

TEST_CASE("power family values and gradient") {
    const auto phi2 = make_power(2.0, 2);
    CHECK(phi2({3.0, 4.0}) == doctest::Approx(12.5));
    CHECK(make_power(2.0, 1)({0.0}) == 0.0);
    CHECK(make_power(3.0, 1)({-2.0}) == doctest::Approx(8.0 / 3.0));

    const Vec g = phi2.gradient({3.0, 4.0});
    CHECK(g[0] == doctest::Approx(3.0));
    CHECK(g[1] == doctest::Approx(4.0));

    CHECK_THROWS_AS(make_power(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_power(0.5, 2), std::invalid_argument);
}

TEST_CASE("anisotropic split") {
    const auto phi = make_aniso(2.0, 4.0, 2, 2);
    CHECK(phi({1.0, 0.0, 1.0, 1.0}) == doctest::Approx(0.5 + 1.0));
    CHECK(phi(zeros(4)) == 0.0);
    // p1 = p2 collapses onto the isotropic power
    const auto iso = make_power(2.0, 2);
    const auto collapsed = make_aniso(2.0, 2.0, 1, 1);
    CHECK(collapsed({1.0, 1.0}) == doctest::Approx(iso({1.0, 1.0})));
    CHECK_THROWS_AS(make_aniso(1.0, 2.0, 1, 1), std::invalid_argument);
}

TEST_CASE("exponential values") {
    const auto phi1 = make_exponential(1);
    CHECK(phi1({0.0}) == 0.0);
    CHECK(phi1({1.0}) == doctest::Approx(std::exp(1.0) - 1.0));
    const auto phi2 = make_exponential(2);
    CHECK(phi2({1.0, 1.0}) == doctest::Approx(std::exp(2.0) - 1.0));
}

TEST_CASE("gradient fallback matches analytic gradients") {
    const auto an = make_exponential(2);
    NFunction fd = an;
    fd.grad_fn = nullptr;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const Vec y = rng.uniform_vec(2, -2.0, 2.0);
        const Vec ga = an.gradient(y);
        const Vec gf = fd.gradient(y);
        for (int k = 0; k < 2; ++k)
            CHECK(gf[k] == doctest::Approx(ga[k]).epsilon(1e-6));
    }
}

TEST_CASE("compose_linear: identity, zero-kernel part, projections") {
    // single identity part reproduces the inner function
    const auto inner = make_power(3.0, 2);
    const auto same = compose_linear({{inner, Mat::identity(2)}});
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        const Vec y = rng.uniform_vec(2, -3.0, 3.0);
        CHECK(same(y) == doctest::Approx(inner(y)));
    }

    // [I, -I] and [0, I] blocks: first part vanishes on the diagonal
    Mat o1(2, 4), o2(2, 4);
    o1(0, 0) = 1;
    o1(1, 1) = 1;
    o1(0, 2) = -1;
    o1(1, 3) = -1;
    o2(0, 2) = 1;
    o2(1, 3) = 1;
    const double p = 3.0;
    const auto comp = compose_linear({{make_power(1.5, 2), o1}, {make_power(p, 2), o2}});
    CHECK(comp({1.0, 0.0, 1.0, 0.0}) == doctest::Approx(1.0 / p));

    // coordinate projections of R^2 reproduce the anisotropic sum
    Mat pr1(1, 2), pr2(1, 2);
    pr1(0, 0) = 1;
    pr2(0, 1) = 1;
    const auto split = compose_linear({{make_power(2.0, 1), pr1}, {make_power(4.0, 1), pr2}});
    const auto aniso = make_aniso(2.0, 4.0, 1, 1);
    for (int i = 0; i < 100; ++i) {
        const Vec y = rng.uniform_vec(2, -3.0, 3.0);
        CHECK(split(y) == doctest::Approx(aniso(y)).epsilon(1e-12));
    }

    // common kernel: both parts see only the first coordinate
    Mat k1(1, 2), k2(1, 2);
    k1(0, 0) = 1;
    k2(0, 0) = 2;
    CHECK_THROWS_AS(compose_linear({{make_power(2.0, 1), k1}, {make_power(2.0, 1), k2}}),
                    KernelIntersectionNonTrivial);
}

TEST_CASE("compose_linear gradient via chain rule") {
    Mat o1(2, 4), o2(2, 4);
    o1(0, 0) = 1;
    o1(1, 1) = 1;
    o1(0, 2) = -1;
    o1(1, 3) = -1;
    o2(0, 2) = 1;
    o2(1, 3) = 1;
    const auto comp = compose_linear({{make_power(1.5, 2), o1}, {make_power(3.0, 2), o2}});
    NFunction fd = comp;
    fd.grad_fn = nullptr;
    Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        const Vec y = rng.uniform_vec(4, -2.0, 2.0);
        const Vec ga = comp.gradient(y);
        const Vec gf = fd.gradient(y);
        for (int k = 0; k < 4; ++k)
            CHECK(ga[k] == doctest::Approx(gf[k]).epsilon(1e-5));
    }
}

TEST_CASE("check_n_infinity classifies the basic shapes") {
    CHECK(check_n_infinity(make_power(2.0, 2)).all_pass());
    CHECK(check_n_infinity(make_power(1.5, 1)).all_pass());
    CHECK(check_n_infinity(make_aniso(2.0, 4.0, 1, 1)).all_pass());
    CHECK(check_n_infinity(make_exponential(2)).all_pass());
    CHECK(check_n_infinity(make_cosh(1)).all_pass());

    // |y| grows exactly linearly: superlinearity must fail
    const auto abs1 = make_custom(1, [](const Vec& y) { return std::abs(y[0]); });
    const auto rep = check_n_infinity(abs1);
    CHECK_FALSE(rep.superlinearity.pass);

    // shifted quadratic: zero-at-zero must fail
    const auto shifted =
        make_custom(1, [](const Vec& y) { return 0.5 * y[0] * y[0] - 1.0; });
    CHECK_FALSE(check_n_infinity(shifted).zero_at_zero.pass);
}

TEST_CASE("scaling properties P1 and P2 on samples") {
    const auto phi = make_aniso(2.0, 4.0, 1, 1);
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        const Vec x = rng.uniform_vec(2, -5.0, 5.0);
        const double lam = rng.uniform();
        CHECK(phi(scaled(x, lam)) <= lam * phi(x) + 1e-12);
        const double l1 = rng.uniform(-2.0, 2.0);
        const double l2 = std::abs(l1) + rng.uniform() + 1e-6;
        CHECK(phi(scaled(x, l1)) <= phi(scaled(x, l2)) + 1e-12);
    }
}

TEST_CASE("delta-2 classification") {
    SUBCASE("powers hold with the doubling constant") {
        for (double p : {1.5, 2.0, 3.0, 5.0}) {
            const auto rep = check_delta2(make_power(p, 1));
            CHECK(rep.holds);
            CHECK(rep.constant == doctest::Approx(std::pow(2.0, p)).epsilon(0.05));
        }
    }
    SUBCASE("anisotropic constant is driven by the larger exponent") {
        const auto rep = check_delta2(make_aniso(2.0, 4.0, 1, 1));
        CHECK(rep.holds);
        CHECK(rep.constant == doctest::Approx(16.0).epsilon(0.05));
    }
    SUBCASE("exponential diverges with a witness ray") {
        const auto rep = check_delta2(make_exponential(1));
        CHECK_FALSE(rep.holds);
        CHECK(rep.witness_ray.size() == 1);
    }
}

TEST_CASE("orderings between powers") {
    const auto p2 = make_power(2.0, 1);
    const auto p4 = make_power(4.0, 1);

    SUBCASE("llcurly with per-k constants matching the 1-d oracle") {
        const auto v = check_order(p2, p4, OrderMode::LlCurly);
        CHECK(v.holds);
        for (const auto& w : v.per_k) {
            CHECK(w.stable);
            // sup_x x^2/2 - (kx)^4/4 attained at x = 1/k, value 1/(4 k^4)
            const double oracle = oracles::golden_max(
                [&](double x) { return x * x / 2.0 - std::pow(w.k * x, 4.0) / 4.0; }, 0.0,
                10.0 / (w.k * w.k));
            CHECK(w.c == doctest::Approx(std::max(oracle, 0.0)).epsilon(1e-3));
            CHECK(w.c == doctest::Approx(1.0 / (4.0 * std::pow(w.k, 4.0))).epsilon(1e-3));
        }
    }
    SUBCASE("reflexivity picks k=1 with zero constant") {
        const auto v = check_order(p2, p2, OrderMode::StrictIf);
        CHECK(v.holds);
        CHECK(v.chosen_k == doctest::Approx(1.0));
        CHECK(v.chosen_c == doctest::Approx(0.0));
    }
    SUBCASE("quartic does not sit below quadratic") {
        const auto v = check_order(p4, p2, OrderMode::StrictIf);
        CHECK_FALSE(v.holds);
        CHECK(!v.fail_witness.empty());
    }
}

TEST_CASE("radial minorant profiles") {
    SUBCASE("isotropic power is its own minorant") {
        const auto prof = radial_minorant(make_power(2.0, 2), 4.0, 32);
        for (std::size_t i = 0; i < prof.knots.size(); ++i)
            CHECK(prof.values[i] ==
                  doctest::Approx(prof.knots[i] * prof.knots[i] / 2.0).epsilon(1e-6));
    }
    SUBCASE("anisotropic profile matches the angle-minimization closed form") {
        const auto prof = radial_minorant(make_aniso(2.0, 4.0, 1, 1), 4.0, 128);
        for (std::size_t i = 0; i < prof.knots.size(); ++i) {
            const double r = prof.knots[i];
            const double expected = r <= 1.0 ? std::pow(r, 4.0) / 4.0 : r * r / 2.0 - 0.25;
            CHECK(prof.values[i] == doctest::Approx(expected).epsilon(1e-6).scale(1.0));
        }
        CHECK(prof.eval(2.0) == doctest::Approx(1.75).epsilon(1e-4));
    }
    SUBCASE("radial exponential is exact at knots") {
        const auto prof = radial_minorant(make_exponential(2), 2.0, 16);
        for (std::size_t i = 0; i < prof.knots.size(); ++i) {
            const double r = prof.knots[i];
            CHECK(prof.values[i] == doctest::Approx(std::expm1(r * r)).epsilon(1e-8));
        }
    }
    SUBCASE("minorant property on random points") {
        const auto phi = make_aniso(2.0, 4.0, 1, 1);
        const auto prof = radial_minorant(phi, 6.0, 256);
        Rng rng(17);
        for (int i = 0; i < 10000; ++i) {
            const Vec x = scaled(rng.unit_vec(2), 6.0 * rng.uniform());
            CHECK(prof.eval(norm2(x)) <= phi(x) + 1e-3 * (1.0 + phi(x)));
        }
    }
    SUBCASE("dominates the hinge minorants k(|x|-r0)+") {
        const auto phi = make_exponential(2);
        const auto prof = radial_minorant(phi, 2.0, 64);
        // hinge functions below phi: k (r - r0)+ with k = phi(r0 e)/r0 slope bound
        for (double r0 : {0.5, 1.0, 1.5}) {
            const double k = (std::expm1(4.0) - std::expm1(r0 * r0)) / (2.0 - r0);
            bool below_phi = true;
            for (double r = 0.0; r <= 2.0; r += 0.01)
                if (k * std::max(r - r0, 0.0) > std::expm1(r * r) + 1e-9) below_phi = false;
            if (!below_phi) continue;
            for (std::size_t i = 0; i < prof.knots.size(); ++i) {
                const double hinge = k * std::max(prof.knots[i] - r0, 0.0);
                CHECK(prof.values[i] >= hinge - 1e-6 * (1.0 + hinge));
            }
        }
    }
}

TEST_CASE("radial minorant inverse") {
    const auto p2 = radial_minorant(make_power(2.0, 1), 4.0, 64);
    CHECK(radial_minorant_inverse(p2, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(radial_minorant_inverse(p2, 0.0) == 0.0);

    const auto prof = radial_minorant(make_aniso(2.0, 4.0, 1, 1), 4.0, 128);
    CHECK(radial_minorant_inverse(prof, 1.75) == doctest::Approx(2.0).epsilon(1e-3));
    CHECK_THROWS_AS(radial_minorant_inverse(prof, 1e9), OutOfRange);
}

TEST_CASE("composed functions still validate as N-infinity") {
    Mat pr1(1, 2), pr2(1, 2);
    pr1(0, 0) = 1;
    pr2(0, 1) = 1;
    const auto split = compose_linear({{make_power(2.0, 1), pr1}, {make_power(4.0, 1), pr2}});
    CHECK(check_n_infinity(split).all_pass());
}
