#include <doctest.h>

#include <cmath>

#include "ddecay/errors.hpp"
#include "ddecay/freeparticle/freeparticle.hpp"

using namespace dd;

// momentum integral in mpmath (tests/oracles/oracles.py)
TEST_CASE("free gaussian against mpmath") {
    const auto g = make_gaussian(0.5, 1.0, 0.7);
    const double rows[][4] = {{3.0, 5.0, 0.21085327125615487, -0.092432314965283033},
                              {-2.0, 0.5, 0.027718029220373291, -0.071895440510430019}};
    for (const auto& r : rows) {
        CHECK(std::abs(free_evolve(g, r[0], r[1]) - cplx(r[2], r[3])) < 1e-14);
        CHECK(std::abs(free_evolve_quadrature(g, r[0], r[1]) - cplx(r[2], r[3])) < 1e-9);
    }
}

TEST_CASE("free localization against mpmath") {
    const auto g = make_gaussian();
    CHECK(free_localization(g, 13.0, 40.0) == doctest::Approx(0.25474209652334412).epsilon(1e-12));
    CHECK(free_localization(g, 13.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("undriven localization falls as 1/t") {
    const auto g = make_gaussian();
    const double p1 = free_localization(g, 13.0, 1e3), p2 = free_localization(g, 13.0, 1e4);
    CHECK(std::log10(p2 / p1) == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("custom packets are normalised") {
    const double s = std::pow(2.0 / PI, 0.25);
    const auto c = make_custom([s](double k) { return cplx(s * std::exp(-k * k)); }, -9.0, 9.0);
    CHECK(c.norm_check == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(free_evolve(c, 1.0, 2.0) - free_evolve(make_gaussian(), 1.0, 2.0)) < 1e-9);
    CHECK_THROWS_AS(make_custom([](double) { return cplx(2.0); }, -1.0, 1.0), DomainError);
}

TEST_CASE("trap candidates") {
    const auto c = trap_candidates(4.0, 1.5);
    REQUIRE(c.size() == 1);
    CHECK(c[0].first == 1);
    CHECK(c[0].second == doctest::Approx(-std::pow(PI / 4.0, 2)));
    CHECK(trap_candidates(2.0, 1.5).empty());
}

TEST_CASE("trapped evolution without drive is free spreading") {
    const auto g = make_gaussian();
    TrapOptions o;
    o.h = 0.05;
    o.dx = 0.05;
    const auto tr = trapped_evolution(ModelConfig::free_trap(4.0, 0.0, 1.5), g, 20.0, o);
    for (std::size_t i = 0; i < tr.t.size(); i += 5)
        CHECK(tr.probability[i] == doctest::Approx(free_localization(g, tr.L, tr.t[i])).epsilon(1e-6));
}
