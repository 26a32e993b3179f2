#include <doctest.h>

#include <cmath>

#include "orlicz/conjugate.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/rng.hpp"
#include "support/oracles.hpp"

using namespace orlicz;

TEST_CASE("power conjugates are dual powers") {
    SUBCASE("the quadratic is self-conjugate") {
        const auto star = conjugate(make_power(2.0, 2));
        CHECK(star.mode() == ConjugateMode::Analytic);
        CHECK(star({1.0, 1.0}) == doctest::Approx(1.0));
    }
    SUBCASE("cubic pairs with exponent 1.5") {
        const auto star = conjugate(make_power(3.0, 1));
        CHECK(star({1.0}) == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("numeric path reproduces the closed form") {
        ConjugateConfig cfg;
        cfg.force_numeric = true;
        for (double p : {1.5, 2.0, 3.0, 5.0}) {
            const auto phi = make_power(p, 1);
            const auto star = conjugate(phi, cfg);
            CHECK(star.mode() == ConjugateMode::Numeric);
            const double q = p / (p - 1.0);
            Rng rng(3);
            for (int i = 0; i < 100; ++i) {
                const double z = rng.uniform(-4.0, 4.0);
                const double expect = std::pow(std::abs(z), q) / q;
                CHECK(star({z}) == doctest::Approx(expect).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("cosh conjugate closed form against a brute-force grid") {
    const auto phi = make_cosh(1);
    const auto star = conjugate(phi);
    CHECK(star.mode() == ConjugateMode::Analytic);
    const double expect = std::asinh(1.0) - std::sqrt(2.0) + 1.0;
    CHECK(star({1.0}) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(star({1.0}) == doctest::Approx(0.46716).epsilon(1e-4));
    CHECK(star({1.0}) ==
          doctest::Approx(oracles::brute_conjugate_1d(phi, 1.0, 10.0, 1e-4)).epsilon(1e-6));

    ConjugateConfig cfg;
    cfg.force_numeric = true;
    const auto numeric = conjugate(phi, cfg);
    for (double z : {-3.0, -0.5, 0.0, 0.25, 2.0})
        CHECK(numeric({z}) == doctest::Approx(star({z})).epsilon(1e-9));
}

TEST_CASE("numeric conjugate of the exponential") {
    const auto phi = make_exponential(1);
    const auto star = conjugate(phi);
    CHECK(star.mode() == ConjugateMode::Numeric);
    for (double z : {0.5, 1.0, 3.0, 10.0}) {
        const double brute = oracles::brute_conjugate_1d(phi, z, 6.0, 1e-5);
        CHECK(star({z}) == doctest::Approx(brute).epsilon(1e-5));
    }
    CHECK(star({0.0}) == doctest::Approx(0.0));
    // argmax consistency: grad phi at the maximizer returns zeta
    Rng rng(23);
    for (int i = 0; i < 200; ++i) {
        const Vec z = rng.uniform_vec(1, -8.0, 8.0);
        const Vec y = star.argmax(z);
        CHECK(phi.gradient(y)[0] == doctest::Approx(z[0]).epsilon(1e-6));
    }
}

TEST_CASE("aniso conjugate splits blockwise") {
    const auto star = conjugate(make_aniso(2.0, 4.0, 1, 1));
    const double q2 = 4.0 / 3.0;
    CHECK(star({1.0, 1.0}) == doctest::Approx(0.5 + 1.0 / q2).epsilon(1e-12));
}

TEST_CASE("non-superlinear input fails to bracket") {
    ConjugateConfig cfg;
    cfg.force_numeric = true;
    const auto abs1 = make_custom(1, [](const Vec& y) { return std::abs(y[0]); });
    const auto star = conjugate(abs1, cfg);
    CHECK_THROWS_AS(star({2.0}), MaximizerNotBracketed);
}

TEST_CASE("young gap and identity") {
    const auto phi = make_power(2.0, 2);
    const auto star = conjugate(phi);
    CHECK(young_gap(phi, star, {1.0, 2.0}, {1.0, 2.0}) == doctest::Approx(0.0));
    CHECK(young_gap(phi, star, {1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(young_gap(phi, star, zeros(2), zeros(2)) == doctest::Approx(0.0));

    SUBCASE("gap is nonnegative on random pairs") {
        Rng rng(31);
        for (const auto& f : {make_power(3.0, 2), make_exponential(2), make_cosh(2)}) {
            const auto fstar = conjugate(f);
            for (int i = 0; i < 2500; ++i) {
                const Vec x = rng.uniform_vec(2, -2.5, 2.5);
                const Vec y = rng.uniform_vec(2, -2.5, 2.5);
                CHECK(young_gap(f, fstar, x, y) >= -1e-9);
            }
        }
    }
    SUBCASE("identity at the cubic witness point") {
        const auto p3 = make_power(3.0, 1);
        const auto p3star = conjugate(p3);
        const double lhs = 2.0 * p3.gradient({2.0})[0];
        const double rhs = p3({2.0}) + p3star(p3.gradient({2.0}));
        CHECK(lhs == doctest::Approx(8.0));
        CHECK(rhs == doctest::Approx(8.0 / 3.0 + 16.0 / 3.0));
        CHECK(check_young_identity(p3, p3star, 500) < 1e-10);
    }
    SUBCASE("identity through the numeric conjugate of the exponential") {
        const auto f = make_exponential(1);
        CHECK(check_young_identity(f, conjugate(f), 1000) < 1e-6);
    }
}

TEST_CASE("biconjugation returns the original function") {
    Rng rng(41);
    for (const auto& f :
         {make_power(3.0, 1), make_aniso(2.0, 3.0, 1, 1), make_exponential(2), make_cosh(1)}) {
        const auto bistar = conjugate(conjugate(f).to_nfunction()).to_nfunction();
        for (int i = 0; i < 300; ++i) {
            const Vec x = rng.uniform_vec(f.dim, -2.0, 2.0);
            CHECK(bistar(x) == doctest::Approx(f(x)).epsilon(1e-7));
        }
    }
}

TEST_CASE("order reversal under conjugation on the power family") {
    const auto p2 = make_power(2.0, 1);
    const auto p4 = make_power(4.0, 1);
    REQUIRE(check_order(p2, p4, OrderMode::StrictIf).holds);
    const auto s2 = conjugate(p2).to_nfunction();
    const auto s4 = conjugate(p4).to_nfunction();
    CHECK(check_order(s4, s2, OrderMode::StrictIf).holds);
    CHECK_FALSE(check_order(s2, s4, OrderMode::StrictIf).holds);
}

TEST_CASE("nabla-2 classification") {
    SUBCASE("quadratic: dual class holds with the homogeneity witness") {
        const auto rep = check_nabla2(make_power(2.0, 1));
        CHECK(rep.holds);
        for (const auto& w : rep.witnesses) {
            CHECK(w.found);
            if (w.r == 0.5) {
                CHECK(w.l == doctest::Approx(2.0));
                CHECK(w.c == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
            }
        }
    }
    SUBCASE("exponential satisfies the dual condition") {
        CHECK(check_nabla2(make_exponential(2)).holds);
    }
    SUBCASE("a function with exponential-type conjugate fails") {
        // conjugate of cosh grows like |y| log |y|; its dual class is the
        // cosh itself, which doubles beyond any constant
        const auto coshstar = conjugate(make_cosh(1)).to_nfunction();
        CHECK_FALSE(check_nabla2(coshstar).holds);
    }
}

TEST_CASE("growth report carries a power envelope when delta-2 holds") {
    const auto rep = growth_report(make_power(3.0, 1));
    CHECK(rep.delta2.holds);
    REQUIRE(rep.power_bound.has_value());
    CHECK(rep.power_bound->p == doctest::Approx(3.0).epsilon(0.05));
    REQUIRE(rep.nabla2.has_value());
    CHECK(rep.nabla2->holds);
}
