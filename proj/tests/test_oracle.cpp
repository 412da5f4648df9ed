#include <doctest.h>

#include <cmath>

#include "ddecay/errors.hpp"
#include "ddecay/oracle/crank_nicolson.hpp"
#include "ddecay/timedomain/volterra.hpp"

using namespace dd;

TEST_CASE("discrete bound state: energy -1 + dx^2/4") {
    GridSpec g;
    g.X = 30.0;
    for (double dx : {0.05, 0.025}) {
        g.dx = dx;
        const auto b = discrete_bound_state(g);
        CHECK((b.energy + 1.0) / (dx * dx) == doctest::Approx(0.25).epsilon(0.01));
        CHECK(b.profile_error < 0.01);
    }
}

TEST_CASE("hard wall run is unitary") {
    const auto cfg = ModelConfig::u2(1.0, 0.8, 1.1);
    const auto run = evolve_pde(cfg, Initial{}, default_grid(cfg, 10.0), 10.0);
    CHECK(run.worst_drift_rate < 1e-6);
    for (double n : run.norm) CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("undersized box and coarse grid are refused") {
    const auto cfg = ModelConfig::u1(0.59, 1.0, 1.25);
    GridSpec g = default_grid(cfg, 20.0);
    g.X = 10.0;
    CHECK_THROWS_AS(evolve_pde(cfg, Initial{}, g, 20.0), DomainError);
    GridSpec c = default_grid(cfg, 20.0);
    c.dx = 0.1;
    CHECK_THROWS_AS(evolve_pde(cfg, Initial{}, c, 20.0), DomainError);
}

TEST_CASE("oracle converges to volterra at second order") {
    const auto cfg = ModelConfig::u1(0.59, 1.0, 1.25);
    const double T = 10.0;
    const double ref = std::norm(survival_from_Y(solve_volterra(cfg, T, 0.005)).theta.back());
    double e[2];
    for (int k = 0; k < 2; ++k) {
        const double dx = 0.05 / (1 << k);
        const auto run = evolve_pde(cfg, Initial{}, default_grid(cfg, T, dx, dx / 5), T);
        e[k] = std::abs(std::norm(run.trace.theta.back()) - ref);
    }
    CHECK(std::log2(e[0] / e[1]) == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("r = 0 oracle keeps the discrete bound state") {
    const auto cfg = ModelConfig::u1(0.59, 0.0, 1.25);
    const auto run = evolve_pde(cfg, Initial{}, default_grid(cfg, 5.0), 5.0);
    for (const cplx th : run.trace.theta) CHECK(std::abs(std::abs(th) - 1.0) < 1e-9);
}
