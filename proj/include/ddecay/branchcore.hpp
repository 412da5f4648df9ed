#pragma once

#include "ddecay/types.hpp"

namespace dd {

enum class Cut { vertical_principal, horizontal_left };
enum class Side { above, below, principal };

// tilt rotates the horizontal-left cut clockwise (downward) by tilt radians, 0 <= tilt < pi/2.
// Used by the long-time decomposition when a pole sits right on the horizontal line.
struct BranchSpec {
    Cut cut = Cut::horizontal_left;
    Side side = Side::principal;
    double tilt = 0.0;
};

// sqrt(w) with the cut of the chosen family, w = 1 - i p (bound) or w = -i p (free).
//
// horizontal_left: cut along arg w = pi/2 + tilt, i.e. p = -i + s e^{i(pi + tilt)}, s > 0.
//   above (the side facing the larger Im p): sqrt = sqrt(s) e^{i(pi/2 + tilt)/2}; below: minus that.
//   Off the cut the value is continuous from the right half plane, so below the cut line it is the
//   continuation across Re p = 0.
// vertical_principal: cut along w < 0, i.e. p = -i - i s; above means Re p -> 0+ (sqrt = -i sqrt(s)),
//   below means Re p -> 0- (sqrt = +i sqrt(s)).
cplx branch_sqrt(cplx w, const BranchSpec& spec);

cplx sqrt_one_minus_ip(cplx p, const BranchSpec& spec = {});
// sqrt(-i p); the sqrt(i p) convention equals i times this, so sqrt(ip) -> i as p -> i
cplx sqrt_minus_ip(cplx p, const BranchSpec& spec = {});

cplx kernel_k_minus(cplx p, double a, const BranchSpec& spec = {});
cplx kernel_k_plus(cplx p, double a, const BranchSpec& spec = {});

enum class WellSign { plus, minus };
// i e^{i d sqrt(ip)} / sqrt(ip) with d = |x - a| for minus and d = |x + a| for plus
cplx free_kernel(double x, cplx p, double a, WellSign sign, const BranchSpec& spec = {});

// kernels between two wells at the same / opposite positions, given the root kappa
struct KPair {
    cplx same;
    cplx opp;
};
// bound: kappa = sqrt(1 - ip), same = k+, opp = k-
KPair bound_kernels_from_root(cplx kappa, double a);
// free: kappa = sqrt(-ip), same = 1/kappa, opp = e^{-2 a kappa}/kappa
KPair free_kernels_from_root(cplx kappa, double a);

cplx expm1c(cplx z);

}  // namespace dd
