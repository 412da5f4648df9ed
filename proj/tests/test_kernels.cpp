#include <doctest.h>

#include <cmath>

#include "ddecay/branchcore.hpp"
#include "ddecay/timedomain/kernels.hpp"

using namespace dd;

// closed forms evaluated in mpmath and checked there against the forward transform at p = 3
TEST_CASE("time kernels against mpmath") {
    const double rows[][4] = {
        {0.3, 0, 0.42265721610808939, 0.37681723049070876},   {0.3, 1, -0.56553963991871635, 0.92340357610466198},
        {2.0, 0, -0.034842789808139841, 0.5884535499328805},  {2.0, 1, 0.027804771067691545, 0.6181935718920136},
        {25.0, 0, 0.00094851174852947943, 0.61388679838816903}, {25.0, 1, -0.00030633110874809442, 0.61483223904392032},
    };
    for (const auto& r : rows) {
        const auto kind = r[1] == 0 ? KernelKind::plus : KernelKind::minus;
        const cplx v = kernel_time(0.59, kind, true, r[0]);
        CHECK(std::abs(v - cplx(r[2], r[3])) < 1e-13);
    }
}

TEST_CASE("forward transform reproduces the Laplace kernels") {
    for (double a : {0.3, 0.59, 2.0}) {
        CHECK(std::abs(kernel_laplace_numeric(a, KernelKind::plus, true, cplx(0.0, 3.0)) - kernel_k_plus(cplx(0.0, 3.0), a)) <
              1e-6);
        CHECK(std::abs(kernel_laplace_numeric(a, KernelKind::minus, true, 3.0) - kernel_k_minus(3.0, a)) < 1e-6);
        const auto rt = round_trip_check(a, KernelKind::minus, true);
        CHECK(rt.worst_rel < 1e-6);
    }
    const auto rf = round_trip_check(1.0, KernelKind::minus, false);
    CHECK(rf.worst_rel < 1e-6);
}

TEST_CASE("kernel table: regular part plus split singularity gives the full kernel") {
    const auto tab = build_kernel_table(0.59, KernelKind::plus, 10.0, 200);
    for (std::size_t i = 1; i < tab.t.size(); i += 37)
        CHECK(std::abs(tab.full(i) - kernel_time(0.59, KernelKind::plus, true, tab.t[i])) < 1e-12);
}

TEST_CASE("product-integration moments of a smooth kernel") {
    // K = 1: A_m = B_m = h/2
    const auto m = kernel_moments([](cplx) { return cplx(1.0); }, 0.1, 20, false, 0.0);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(std::abs(m.A[i] - 0.05) < 1e-14);
        CHECK(std::abs(m.B[i] - 0.05) < 1e-14);
    }
    // K = tau^{-1/2}: A_0 = int_0^h (h - tau)/h tau^{-1/2} = 4/3 sqrt(h), B_0 = 2/3 sqrt(h)
    const auto s = kernel_moments([](cplx t) { return 1.0 / std::sqrt(t); }, 0.04, 3, true, 0.0);
    CHECK(std::abs(s.A[0] - 4.0 / 3.0 * 0.2) < 1e-12);
    CHECK(std::abs(s.B[0] - 2.0 / 3.0 * 0.2) < 1e-12);
}
