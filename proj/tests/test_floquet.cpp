#include <doctest.h>

#include <cmath>

#include "ddecay/errors.hpp"
#include "ddecay/floquet/asymptotic.hpp"
#include "ddecay/floquet/poles.hpp"
#include "ddecay/floquet/recurrence.hpp"
#include "ddecay/floquet/stabilization.hpp"

using namespace dd;

// mpmath scalar continued fraction + findroot (tests/oracles/oracles.py)
TEST_CASE("U1 pole against mpmath") {
    struct Row {
        double r, re, im;
    };
    const Row rows[] = {{0.1, -0.00044157946018410158, 0.0016179337722678421},
                        {0.05, -0.00011029596176023625, 0.00040407688308671262}};
    for (const auto& row : rows) {
        const auto pole = find_pole(ModelConfig::u1(0.59, row.r, 1.5));
        REQUIRE(pole.converged);
        CHECK(std::abs(pole.xi0 - cplx(row.re, row.im)) < 1e-12 * std::abs(cplx(row.re, row.im)) + 1e-16);
        CHECK(pole.gamma == doctest::Approx(-2.0 * row.re).epsilon(1e-10));
        CHECK(pole.order_N == 1);
        CHECK_FALSE(pole.near_branch_point);
    }
}

TEST_CASE("exactly one pole near the origin") {
    const auto cfg = ModelConfig::u1(0.59, 0.1, 1.5);
    CHECK(count_zeros(cfg, cplx(-0.01, -0.01), cplx(0.01, 0.01)) == 1);
}

TEST_CASE("pole at r = 0 is the bound state") {
    const auto pole = find_pole(ModelConfig::u2(1.0, 0.0, 1.3));
    CHECK(pole.converged);
    CHECK(pole.xi0 == cplx(0.0));
    CHECK(pole.gamma == 0.0);
}

TEST_CASE("multiphoton order") {
    CHECK(multiphoton_order(1.5) == 1);
    CHECK(multiphoton_order(0.55) == 2);
    CHECK(multiphoton_order(0.3) == 4);
    CHECK_THROWS_AS(multiphoton_order(0.5), DomainError);
}

TEST_CASE("pole function is insensitive to the truncation window") {
    const auto cfg = ModelConfig::u2(1.0, 0.7, 0.9);
    const cplx p0(0.02, 0.1);
    const cplx f1 = pole_function(cfg, p0, 20), f2 = pole_function(cfg, p0, 40);
    CHECK(std::abs(f1 - f2) < 1e-12 * std::abs(f2));
}

TEST_CASE("inhomogeneous solution satisfies the recurrence") {
    const auto cfg = ModelConfig::u1(0.59, 1.0, 1.25);
    const auto sol = solve_converged(cfg, cplx(0.1, 0.2), 4, 1e-12);
    CHECK(sol.residual < 1e-10);
    CHECK(sol.change < 1e-12);
}

TEST_CASE("golden-rule scaling at small r") {
    const double g1 = find_pole(ModelConfig::u1(0.59, 0.01, 1.5)).gamma;
    const double g2 = find_pole(ModelConfig::u1(0.59, 0.02, 1.5)).gamma;
    CHECK(std::log2(g2 / g1) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("stark shift and width coefficients") {
    const auto cfg = ModelConfig::u1(0.59, 0.1, 1.5);
    const auto pole = find_pole(cfg);
    const auto ls = lambda_sigma(cfg, pole);
    CHECK(ls.lambda > 0.0);
    // reproduces the pole it came from
    CHECK(-0.01 * ls.lambda * std::sqrt(1.5 - 1.0 - 0.01 * ls.sigma) == doctest::Approx(pole.xi0.real()).epsilon(1e-12));
}

TEST_CASE("resonance integral") {
    CHECK_THROWS_AS(theta_resonance(0.05, 0.0, 0.2, 0.08), DomainError);
    // |theta| decreases monotonically once the power law sets in
    double prev = 1.0;
    for (double t : {1e8, 1e9, 1e10, 1e11}) {
        const double v = std::norm(theta_resonance(0.05, t, 0.2, 0.0793));
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("U1 stabilization energy against mpmath") {
    const auto g0 = stabilization_g0(Potential::U1, 0.59, 1);
    REQUIRE(g0.has_value());
    CHECK(*g0 == doctest::Approx(-0.91663952238294242).epsilon(1e-12));
    CHECK_FALSE(stabilization_g0(Potential::U1, 0.45, 1).has_value());
    CHECK_FALSE(stabilization_g0(Potential::U1, 0.59, 2).has_value());
}

TEST_CASE("U1 stabilizing frequency at r = 1 against mpmath") {
    const auto pts = stabilizing_frequencies(Potential::U1, 0.59, 1.0, 1, 1.0, 1.3);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].omega == doctest::Approx(1.0976309931214461).epsilon(1e-9));
    CHECK(std::abs(pts[0].omega - 1.089) < 0.01);
}

TEST_CASE("U1 below a = 1/2 has no manifold") {
    CHECK_FALSE(stabilization_search(Potential::U1, 0.45, 1.1, 1).has_value());
    CHECK(stabilizing_frequencies(Potential::U1, 0.45, 1.0, 1, 1.0, 2.0).empty());
}

TEST_CASE("free trap stabilization point against mpmath") {
    const auto p = stabilization_search(4.0, 1.5, 1, StabMode::free);
    REQUIRE(p.has_value());
    CHECK(p->g0 == doctest::Approx(-0.61685027506808491).epsilon(1e-12));
    CHECK(p->r_s == doctest::Approx(1.8902902571960153).epsilon(1e-8));
    // the decaying solution really matches: defect vanishes at r_s
    CHECK(std::abs(matching_defect(ModelConfig::free_trap(4.0, p->r_s, 1.5), p->g0, p->r_s)) < 1e-10);
}

TEST_CASE("U2 condition a sqrt(-1 - g0) = pi N") {
    const auto g0 = stabilization_g0(Potential::U2, 3.0, 1);
    REQUIRE(g0.has_value());
    CHECK(3.0 * std::sqrt(-1.0 - *g0) == doctest::Approx(PI));
    CHECK(stabilization_search(Potential::U2, 3.0, 2.5, 1).has_value());
    // g0 below -omega: nothing
    CHECK_FALSE(stabilization_search(Potential::U2, 3.0, 1.5, 1).has_value());
}

TEST_CASE("rho recursion") {
    const auto cfg = ModelConfig::u1(0.59, 1.0, 1.2);
    const double g0 = *stabilization_g0(Potential::U1, 0.59, 1);
    const auto rho = rho_recursion(cfg, g0, 1.0, 5);
    REQUIRE(rho.size() == 5);
    CHECK(rho[0] == doctest::Approx(2.0 / stabilization_coefficient(cfg, g0, 1)));
    CHECK(rho[1] == doctest::Approx(2.0 / stabilization_coefficient(cfg, g0, 2) - 1.0 / rho[0]));
}
