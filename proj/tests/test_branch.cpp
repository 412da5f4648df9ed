#include <doctest.h>

#include <cmath>

#include "ddecay/analysis/validate.hpp"
#include "ddecay/branchcore.hpp"
#include "ddecay/errors.hpp"
#include "ddecay/faddeeva.hpp"

using namespace dd;

TEST_CASE("principal root at p = 3i is 2") {
    const cplx v = sqrt_one_minus_ip(cplx(0.0, 3.0));
    CHECK(std::abs(v - 2.0) < 1e-15);
}

TEST_CASE("vertical cut at p = -2i: conjugate pair on the two sides") {
    const cplx above = sqrt_one_minus_ip(cplx(0.0, -2.0), {Cut::vertical_principal, Side::above});
    const cplx below = sqrt_one_minus_ip(cplx(0.0, -2.0), {Cut::vertical_principal, Side::below});
    CHECK(std::abs(above + I) < 1e-15);
    CHECK(std::abs(below - I) < 1e-15);
    CHECK(std::abs(above - std::conj(below)) < 1e-15);
}

TEST_CASE("on a horizontal cut the principal side is ambiguous") {
    CHECK_THROWS_AS(sqrt_one_minus_ip(cplx(-0.5, -1.0), {Cut::horizontal_left, Side::principal}), BranchAmbiguityError);
}

TEST_CASE("side limits agree with points just off the horizontal cut") {
    const cplx on(-0.7, -1.0);
    const cplx up = sqrt_one_minus_ip(on + cplx(0.0, 1e-13));
    const cplx dn = sqrt_one_minus_ip(on - cplx(0.0, 1e-13));
    CHECK(std::abs(up - sqrt_one_minus_ip(on, {Cut::horizontal_left, Side::above})) < 1e-10);
    CHECK(std::abs(dn - sqrt_one_minus_ip(on, {Cut::horizontal_left, Side::below})) < 1e-10);
    CHECK(std::abs(up + dn) < 1e-10);
}

TEST_CASE("continuation around the branch points") {
    for (bool free : {false, true}) {
        const auto h = check_branch_continuity(Cut::horizontal_left, free);
        CHECK_MESSAGE(h.pass, h.detail);
    }
    const auto v = check_branch_continuity(Cut::vertical_principal, false);
    CHECK_MESSAGE(v.pass, v.detail);
    // different radii
    for (double rho : {0.05, 2.0}) CHECK(check_branch_continuity(Cut::horizontal_left, false, rho).pass);
}

TEST_CASE("negative control: a flipped branch sign is caught") {
    const auto c = check_branch_continuity(Cut::horizontal_left, false, 0.5, true);
    CHECK_FALSE(c.pass);
    CHECK(c.value > 1.0);
}

TEST_CASE("kernel identity k+ sqrt(1-ip) - k- = 1") {
    const auto c = check_kernel_identity(400, 5);
    CHECK_MESSAGE(c.pass, c.detail);
}

// mpmath values (tests/oracles/oracles.py)
TEST_CASE("Laplace kernels against mpmath") {
    struct Row {
        cplx p;
        double kp_re, kp_im, km_re, km_im;
    };
    const Row rows[] = {
        {{0.0, 3.0}, 0.54721011159815117, 0.0, 0.09442022319630234, 0.0},
        {{0.2, -0.5}, -0.5176246004456668, 0.45698504125646398, -1.3095804185617965, 0.4011343487981608},
    };
    for (const auto& r : rows) {
        const cplx kp = kernel_k_plus(r.p, 0.59), km = kernel_k_minus(r.p, 0.59);
        CHECK(std::abs(kp - cplx(r.kp_re, r.kp_im)) < 1e-14);
        CHECK(std::abs(km - cplx(r.km_re, r.km_im)) < 1e-14);
    }
}

TEST_CASE("k- has the bound-state pole at p = 0") {
    CHECK_THROWS_AS(kernel_k_minus(0.0, 0.59), PoleError);
}

TEST_CASE("free kernel decays away from the well") {
    const cplx p(0.1, 0.4);
    const cplx near = free_kernel(1.1, p, 1.0, WellSign::minus), far = free_kernel(4.0, p, 1.0, WellSign::minus);
    CHECK(std::abs(far) < std::abs(near));
    CHECK_THROWS_AS(free_kernel(0.0, 0.0, 1.0, WellSign::plus), BranchPointError);
}

// scipy.special.wofz
TEST_CASE("Faddeeva function against scipy") {
    const double rows[][4] = {
        {0.5, 0.5, 0.5331567079121748, 0.2304882313844585},
        {-3.0, 0.2, 0.015626770455552136, -0.19966856321866638},
        {10.0, 0.001, 5.728717502841752e-06, 0.056705393651106197},
        {1.0, -0.7, -0.1315916845775869, 1.4619617977493242},
    };
    for (const auto& r : rows) {
        const cplx w = faddeeva_w({r[0], r[1]});
        CHECK(std::abs(w - cplx(r[2], r[3])) / std::abs(cplx(r[2], r[3])) < 1e-13);
    }
}

TEST_CASE("expm1c keeps relative accuracy near zero") {
    const cplx z(1e-12, -2e-12);
    CHECK(std::abs(expm1c(z) - z) / std::abs(z) < 1e-11);
}
