#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ddecay/types.hpp"

namespace dd {

// Time-domain kernels of the Volterra system, i.e. inverse Laplace transforms of the Laplace kernels:
//   plus  (same well):     bound k+(p),  free 1/sqrt(-ip)
//   minus (opposite well): bound k-(p),  free e^{-2a sqrt(-ip)}/sqrt(-ip)
// Closed forms (bound case, R the inverse transform of e^{-2a kappa}/(kappa (kappa - 1))):
//   K+(t) = e^{i pi/4 - i t}/sqrt(pi t) + R(t)
//   K-(t) = e^{i pi/4 - i t + i a^2/t}/sqrt(pi t) + R(t)
//   R(t)  = i e^{-2a} erfc(e^{-i pi/4}(a/sqrt(t) - i sqrt(t)))
// Free case: the same without e^{-it} and without R.
enum class KernelKind { plus, minus };

// analytic in the cut plane |arg tau| < pi, so quadrature paths may leave the real axis
cplx kernel_time(double a, KernelKind kind, bool binding, cplx tau);

// coefficient c and chirp q of the split-off part c e^{i q/t} t^{-1/2} (q = a^2 for minus, else 0)
struct SingularPart {
    double exponent = -0.5;
    cplx coefficient{};
    double chirp = 0.0;
};
SingularPart singular_part(double a, KernelKind kind, bool binding);

// values = K(t) - singular part, on a grid that is geometric near 0 and uniform after
struct KernelTable {
    double a = 0.0;
    KernelKind kind = KernelKind::plus;
    bool binding = true;
    std::vector<double> t;
    std::vector<cplx> values;
    SingularPart singular;

    cplx full(std::size_t i) const;  // regular + singular at t[i] > 0
};

// Throws Error when the round trip (below) fails at 1e-6.
KernelTable build_kernel_table(double a, KernelKind kind, double t_max, int n_samples, bool binding = true);

// Laplace transform of the closed form, integrated along the ray arg tau = -pi/4; valid for
// Re(p e^{-i pi/4}) > 0 (bound) after the pole at p = 0 is accounted for by the rotation
cplx kernel_laplace_numeric(double a, KernelKind kind, bool binding, cplx p);

struct RoundTrip {
    double worst_rel = 0.0;
    cplx worst_p{};
};
// compares kernel_laplace_numeric with the Laplace-space kernel at random points in the
// admissible sector, 3i included
RoundTrip round_trip_check(double a, KernelKind kind, bool binding, int points = 10, std::uint64_t seed = 7);

// Product-integration moments on a uniform grid:
//   A_m = int_{mh}^{(m+1)h} K(tau) ((m+1)h - tau)/h dtau,  B_m = int K(tau) (tau - mh)/h dtau.
// Panels near tau = 0, and panels where a chirp e^{i q/tau} is fast, are integrated adaptively on a
// semicircle below the real axis; the rest with 8-point Gauss-Legendre.
struct Moments {
    double h = 0.0;
    std::vector<cplx> A, B;
};
using KernelFn = std::function<cplx(cplx)>;
// singular: K ~ tau^{-1/2} at 0; chirp: q of e^{i q/tau} (0 for none)
Moments kernel_moments(const KernelFn& K, double h, std::size_t count, bool singular, double chirp);

}  // namespace dd
