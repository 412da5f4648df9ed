#include <doctest.h>

#include <cmath>

#include "ddecay/analysis/fit.hpp"
#include "ddecay/errors.hpp"

using namespace dd;

TEST_CASE("synthetic exponential: slope -0.1, verdict true") {
    std::vector<double> t, y;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(0.25 * i);
        y.push_back(std::exp(-0.1 * t.back()));
    }
    const auto f = fit_exponential(t, y, 10.0, 90.0, 1.0);
    CHECK(f.slope == doctest::Approx(-0.1).epsilon(1e-3));
    CHECK(std::abs(f.slope + 0.1) < 1e-4);
    CHECK(f.verdict);
    CHECK(f.residual < 1e-12);
    const auto w = exponential_window(t, y, 1.0);
    CHECK(w.verdict);
    CHECK(std::abs(w.slope + 0.1) < 1e-4);
}

TEST_CASE("synthetic power law: slope -3") {
    std::vector<double> t, y;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(std::pow(10.0, 3.0 + 0.02 * i));
        y.push_back(2.5 * std::pow(t.back(), -3.0));
    }
    const auto f = fit_power_law(t, y, 1e4, 1e5);
    CHECK(std::abs(f.slope + 3.0) < 1e-3);
    CHECK(f.intercept == doctest::Approx(std::log10(2.5)));
}

TEST_CASE("a window spanning too few periods is not exponential") {
    std::vector<double> t, y;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(0.1 * i);
        y.push_back(std::exp(-0.5 * t.back()));
    }
    // omega = 0.5: one period is 12.6, the window [1, 19] covers 1.4 periods
    const auto f = fit_exponential(t, y, 1.0, 19.0, 0.5);
    CHECK(f.residual < 1e-10);
    CHECK_FALSE(f.verdict);
}

TEST_CASE("ripples above the smoothed threshold fail the window rule") {
    // a beat much shorter than one e-fold survives the one-period average; raw rms stays under 0.05
    std::vector<double> t, y;
    for (int i = 0; i <= 4000; ++i) {
        const double s = 0.125 * i;
        t.push_back(s);
        y.push_back(std::exp(-0.01 * s) * (1.0 + 0.03 * std::sin(0.2 * s)) * (1.0 + 0.05 * std::sin(2.0 * s)));
    }
    const auto w = exponential_window(t, y, 1.0);
    CHECK_FALSE(w.verdict);
    CHECK(w.smooth_residual > 0.005);
    CHECK(w.residual < 0.05);
}

TEST_CASE("window outside the data is an error") {
    std::vector<double> t{0, 1, 2, 3, 4, 5}, y{1, 0.5, 0.25, 0.125, 0.0625, 0.03125};
    CHECK_THROWS_AS(fit_exponential(t, y, 3.0, 9.0, 1.0), DomainError);
    CHECK_THROWS_AS(fit_power_law(t, y, 0.0, 4.0), DomainError);
}

TEST_CASE("gamma vs r exponent") {
    std::vector<double> r, g;
    for (double x : {0.01, 0.02, 0.05, 0.1}) {
        r.push_back(x);
        g.push_back(0.09 * x * x);
    }
    CHECK(fit_gamma_vs_r(r, g).slope == doctest::Approx(2.0));
}

TEST_CASE("spectral peak finds the modulation frequency") {
    std::vector<double> t, y;
    for (int i = 0; i < 2000; ++i) {
        t.push_back(0.05 * i);
        y.push_back(0.3 * t.back() + std::sin(2.4 * t.back()) + 0.2 * std::sin(5.0 * t.back()));
    }
    const auto p = spectral_peak(t, y);
    CHECK(std::abs(p.frequency - 2.4) < p.bin_width);
}

TEST_CASE("quasiperiodicity of a periodic signal") {
    std::vector<double> t, y;
    for (int i = 0; i < 4000; ++i) {
        t.push_back(0.05 * i);
        y.push_back(std::cos(1.5 * t.back()) + 0.3 * std::cos(3.0 * t.back()));
    }
    CHECK(quasiperiodicity(t, y, 1.5, 20.0) > 0.999);
}

TEST_CASE("least squares on exact line") {
    const auto f = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.rms < 1e-14);
}
