#include <doctest.h>

#include <cmath>

#include "orlicz/errors.hpp"
#include "orlicz/potential.hpp"
#include "orlicz/rng.hpp"
#include "support/oracles.hpp"

using namespace orlicz;

namespace {

Polynomial quartic_2d() {
    // (x1^2+x2^2)^2 - x1 + 0.5 x2
    Polynomial q;
    q.dim = 2;
    q.terms = {{1.0, {4, 0}}, {2.0, {2, 2}}, {1.0, {0, 4}}, {-1.0, {1, 0}}, {0.5, {0, 1}}};
    return q;
}

TimeFunction bump_poly() {
    // 0.5 - 4 (t - 1/2)^2 = -1.5 + 4t - 4t^2, sign-changing with positive mean...
    return TimeFunction{{-1.5, 4.0, -4.0}, std::nullopt};
}

} // namespace

TEST_CASE("polynomial evaluation and gradient") {
    const auto q = quartic_2d();
    CHECK(q.degree() == 4);
    CHECK(q.eval({1.0, 1.0}) == doctest::Approx(4.0 - 1.0 + 0.5));
    Rng rng(2);
    for (int i = 0; i < 200; ++i) {
        const Vec x = rng.uniform_vec(2, -3.0, 3.0);
        const auto g = q.gradient(x);
        const auto fd = oracles::central_gradient([&](const Vec& y) { return q.eval(y); }, x);
        for (int k = 0; k < 2; ++k) CHECK(g[k] == doctest::Approx(fd[k]).epsilon(1e-6));
    }
}

TEST_CASE("built-in potentials expose consistent gradients") {
    TrigPoly forcing;
    forcing.period = 1.0;
    forcing.a0 = {0.0};
    forcing.a = {{0.0}};
    forcing.b = {{-1.0}};
    const auto quad = make_quadratic_forcing(forcing, 1.0);
    const auto sep = make_separable(bump_poly(), quartic_2d(), 1.0);

    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        const double t = rng.uniform();
        {
            const Vec x = rng.uniform_vec(1, -4.0, 4.0);
            const auto g = quad.gradient(t, x);
            const auto fd = oracles::central_gradient(
                [&](const Vec& y) { return quad(t, y); }, x);
            CHECK(g[0] == doctest::Approx(fd[0]).epsilon(1e-5));
        }
        {
            const Vec x = rng.uniform_vec(2, -4.0, 4.0);
            const auto g = sep.gradient(t, x);
            const auto fd = oracles::central_gradient(
                [&](const Vec& y) { return sep(t, y); }, x);
            for (int k = 0; k < 2; ++k)
                CHECK(g[k] == doctest::Approx(fd[k]).epsilon(1e-5).scale(1.0 + std::abs(g[k])));
        }
    }
}

TEST_CASE("condition A envelopes") {
    SUBCASE("linear forcing potential with generous envelopes") {
        auto f = make_custom_potential(
            1, 1.0,
            [](double t, const Vec& x) { return std::sin(2.0 * M_PI * t) * x[0]; },
            [](double t, const Vec&) { return Vec{std::sin(2.0 * M_PI * t)}; });
        f.hyp.a = [](const Vec& x) { return 1.0 + std::abs(x[0]); };
        f.hyp.b = [](double t) { return 1.0 + std::abs(std::sin(2.0 * M_PI * t)); };
        CHECK(check_condition_A(f).holds);
    }
    SUBCASE("zero envelope fails wherever F is nonzero") {
        auto f = make_custom_potential(
            1, 1.0, [](double, const Vec& x) { return x[0]; },
            [](double, const Vec&) { return Vec{1.0}; });
        f.hyp.a = [](const Vec&) { return 0.0; };
        f.hyp.b = [](double) { return 1.0; };
        CHECK_FALSE(check_condition_A(f).holds);
    }
    SUBCASE("separable potentials carry their own envelope") {
        const auto sep = make_separable(bump_poly(), quartic_2d(), 1.0);
        CHECK(check_condition_A(sep).holds);
    }
    SUBCASE("missing data raises") {
        const auto f = make_custom_potential(1, 1.0,
                                             [](double, const Vec& x) { return x[0]; });
        CHECK_THROWS_AS(check_condition_A(f), MissingHypothesisData);
    }
}

TEST_CASE("condition B display") {
    SUBCASE("linear-in-x potential under the quadratic") {
        auto f = make_custom_potential(
            1, 1.0,
            [](double t, const Vec& x) { return std::cos(2.0 * M_PI * t) * x[0]; },
            [](double t, const Vec&) { return Vec{std::cos(2.0 * M_PI * t)}; });
        const auto phi = make_power(2.0, 1);
        const auto phi0 = make_pnorm(1.5, 1);
        const auto v = check_condition_B(f, phi, phi0, [](double) { return 1.0; });
        // phi*(grad F / d) = cos^2/2 <= 1/2 <= phi0(x) + 1
        CHECK(v.holds);
    }
    SUBCASE("quadratic growth with matching phi0 violates the ordering") {
        auto f = make_custom_potential(
            1, 1.0, [](double, const Vec& x) { return x[0] * x[0]; },
            [](double, const Vec& x) { return Vec{2.0 * x[0]}; });
        const auto phi = make_power(2.0, 1);
        CHECK_THROWS_AS(
            check_condition_B(f, phi, make_power(2.0, 1), [](double) { return 1.0; }),
            OrderingViolation);
        // with the ordering precondition skipped the display itself fails
        const auto v = check_condition_B(f, phi, make_power(2.0, 1),
                                         [](double) { return 1.0; }, HypGridConfig::defaults(),
                                         false);
        CHECK_FALSE(v.holds);
    }
    SUBCASE("polynomial recipe closes the display for the exponential") {
        const auto sep = make_separable(bump_poly(), quartic_2d(), 1.0);
        const auto phi = make_exponential(2);
        const auto recipe = condition_b_recipe(sep, phi);
        CHECK(recipe.found);
        CHECK(recipe.q == doctest::Approx(3.5));
        const auto v = check_condition_B(sep, phi, recipe.phi0, recipe.dfun);
        CHECK(v.holds);
    }
    SUBCASE("recipe closes the display for random polynomial pairs") {
        Rng rng(17);
        for (int trial = 0; trial < 6; ++trial) {
            const int deg_p = 1 + static_cast<int>(rng.uniform() * 5.0);
            const int deg_q = 1 + static_cast<int>(rng.uniform() * 5.0);
            TimeFunction p;
            p.poly.resize(deg_p + 1);
            for (auto& c : p.poly) c = rng.uniform(-2.0, 2.0);
            Polynomial q;
            q.dim = 2;
            for (int a = 0; a + 0 <= deg_q; ++a)
                for (int b = 0; a + b <= deg_q; ++b)
                    if (rng.uniform() < 0.4) q.terms.push_back({rng.uniform(-1.0, 1.0), {a, b}});
            if (q.terms.empty()) q.terms.push_back({1.0, {deg_q, 0}});
            const auto sep = make_separable(p, q, 1.0);
            const auto phi = make_exponential(2);
            const auto recipe = condition_b_recipe(sep, phi);
            CHECK(recipe.found);
            CHECK(check_condition_B(sep, phi, recipe.phi0, recipe.dfun).holds);
        }
    }
}

TEST_CASE("condition H windows and bounds") {
    auto base = make_custom_potential(
        2, 1.0,
        [](double, const Vec& x) {
            return std::pow(std::abs(x[0]), 1.2) + std::pow(std::abs(x[1]), 1.5);
        },
        [](double, const Vec& x) {
            return Vec{1.2 * std::pow(std::abs(x[0]), 0.2) * (x[0] >= 0 ? 1.0 : -1.0),
                       1.5 * std::pow(std::abs(x[1]), 0.5) * (x[1] >= 0 ? 1.0 : -1.0)};
        });
    SplitGrowthData s;
    s.p1 = 2.0;
    s.p2 = 2.0;
    s.d1 = 1;
    s.d2 = 1;
    s.alpha1 = 0.2;
    s.alpha2 = 0.5;
    s.beta1 = 0.0;
    s.beta2 = 0.0;
    auto c = [](double v) {
        return std::function<double(double)>([v](double) { return v; });
    };
    s.f1 = c(1.2);
    s.f2 = c(1.5);
    s.g1 = c(0.0);
    s.g2 = c(0.0);
    s.h1 = c(0.1);
    s.h2 = c(0.1);

    SUBCASE("fractional powers sit inside the windows") {
        base.hyp.split = s;
        CHECK(check_condition_H(base).holds);
    }
    SUBCASE("boundary exponent is excluded") {
        auto s2 = s;
        s2.alpha1 = 1.0;  // equals p1/p1' exactly
        base.hyp.split = s2;
        const auto v = check_condition_H(base);
        CHECK_FALSE(v.holds);
        CHECK(v.detail.find("alpha1") != std::string::npos);
    }
    SUBCASE("zero potential holds with zero data") {
        auto zf = make_custom_potential(2, 1.0, [](double, const Vec&) { return 0.0; },
                                        [](double, const Vec&) { return zeros(2); });
        auto s3 = s;
        s3.f1 = s3.f2 = s3.g1 = s3.g2 = s3.h1 = s3.h2 = c(0.0);
        zf.hyp.split = s3;
        CHECK(check_condition_H(zf).holds);
    }
}

TEST_CASE("coercivity ratio curves") {
    const auto phi0 = make_pnorm(2.0, 1);
    SUBCASE("quartic over quadratic grows") {
        const auto f = make_custom_potential(
            1, 1.0, [](double, const Vec& x) { return std::pow(x[0], 4.0); },
            [](double, const Vec& x) { return Vec{4.0 * std::pow(x[0], 3.0)}; });
        CHECK(check_coercivity_F(f, phi0).verdict == CoercivityVerdict::Holds);
    }
    SUBCASE("quadratic over quadratic is bounded") {
        const auto f = make_custom_potential(
            1, 1.0, [](double, const Vec& x) { return x[0] * x[0]; },
            [](double, const Vec& x) { return Vec{2.0 * x[0]}; });
        const auto rep = check_coercivity_F(f, phi0);
        CHECK(rep.verdict == CoercivityVerdict::Fails);
        // ratio settles at 1/4: x^2 / (2x)^2
        CHECK(rep.worst_ratio.back() == doctest::Approx(0.25).epsilon(0.01));
    }
    SUBCASE("negative growth fails") {
        const auto f = make_custom_potential(
            1, 1.0, [](double, const Vec& x) { return -std::abs(x[0]); },
            [](double, const Vec& x) { return Vec{x[0] >= 0 ? -1.0 : 1.0}; });
        CHECK(check_coercivity_F(f, phi0).verdict == CoercivityVerdict::Fails);
    }
}

TEST_CASE("structure condition") {
    SUBCASE("remark bound for the quadratic at Lambda = 1/2") {
        const auto phi = make_power(2.0, 1);
        auto f = make_custom_potential(1, 1.0, [](double, const Vec&) { return 0.0; },
                                       [](double, const Vec&) { return zeros(1); });
        f.hyp.a = [](const Vec&) { return 3.0; };
        f.hyp.b = [](double) { return 1.0; };
        const auto rep = check_condition_S(phi, f, 0.5, 1.0);
        CHECK(rep.remark_bound_holds);
        CHECK(rep.condition_holds);
    }
    SUBCASE("bounded potential with a constant envelope") {
        const auto phi = make_power(2.0, 1);
        auto f = make_custom_potential(
            1, 1.0,
            [](double t, const Vec& x) { return std::cos(2.0 * M_PI * t) * std::sin(x[0]); },
            [](double t, const Vec& x) {
                return Vec{std::cos(2.0 * M_PI * t) * std::cos(x[0])};
            });
        f.hyp.a = [](const Vec&) { return 4.0; };
        f.hyp.b = [](double) { return 1.0; };
        CHECK(check_condition_S(phi, f, 0.5, 1.0).condition_holds);
    }
    SUBCASE("Lambda outside (0,1) is rejected") {
        const auto phi = make_power(2.0, 1);
        auto f = make_custom_potential(1, 1.0, [](double, const Vec&) { return 0.0; });
        f.hyp.a = [](const Vec&) { return 1.0; };
        f.hyp.b = [](double) { return 1.0; };
        CHECK_THROWS_AS(check_condition_S(phi, f, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(check_condition_S(phi, f, 0.5, -1.0), std::invalid_argument);
    }
}

TEST_CASE("manufactured potential") {
    const auto ustar = Trajectory::from_function(1.0, 128, 1, [](double t) {
        return Vec{0.5 * std::sin(2.0 * M_PI * t)};
    });
    SUBCASE("under the quadratic the flux rate is the second derivative") {
        const auto f = make_manufactured(make_power(2.0, 1), ustar);
        for (double t : {0.1, 0.37, 0.62, 0.95}) {
            const double u = 0.5 * std::sin(2.0 * M_PI * t);
            const double upp = -0.5 * 4.0 * M_PI * M_PI * std::sin(2.0 * M_PI * t);
            // on the exact path the gradient equals d/dt grad phi(u*') = u*''
            CHECK(f.gradient(t, {u})[0] == doctest::Approx(upp).epsilon(1e-8));
        }
    }
    SUBCASE("construction identity at arbitrary x") {
        const auto f = make_manufactured(make_power(3.0, 1), ustar);
        for (double t : {0.2, 0.45, 0.81}) {
            const double u = 0.5 * std::sin(2.0 * M_PI * t);
            const Vec gu = f.gradient(t, {u});
            const Vec gx = f.gradient(t, {u + 2.0});
            CHECK(gx[0] - gu[0] == doctest::Approx(2.0).epsilon(1e-9));
        }
    }
    SUBCASE("auto envelope satisfies condition A and linear-comparison coercivity") {
        const auto f = make_manufactured(make_power(3.0, 1), ustar);
        CHECK(check_condition_A(f).holds);
        const auto abs1 = make_custom(1, [](const Vec& x) { return std::abs(x[0]); },
                                      nullptr, true);
        CHECK(check_coercivity_F(f, abs1).verdict == CoercivityVerdict::Holds);
    }
}
