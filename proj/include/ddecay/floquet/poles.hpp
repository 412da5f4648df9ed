#pragma once

#include <string>

#include "ddecay/branchcore.hpp"
#include "ddecay/types.hpp"

namespace dd {

struct PoleResult {
    cplx xi0{};
    double gamma = 0.0;        // -2 Re xi0
    double stark_shift = 0.0;  // Im xi0
    int order_N = 1;
    bool converged = false;    // the root iteration met its tolerance
    int truncation_used = 0;
    double residual = 0.0;
    // distance to the nearest branch point is below 4 Gamma: the pole/cut separation used by the
    // decomposition is unreliable here (resonance regime)
    bool near_branch_point = false;
    double branch_distance = 0.0;
    std::string diagnostic;
};

struct PoleOptions {
    double tol = 1e-13;
    int max_iter = 200;
    BranchSpec spec{};
};

// Zero of the harmonic-0 determinant of the homogeneous recurrence. guess = 0 means "start from
// the origin": a Newton step from a point O(r^2) away seeds the secant iteration.
PoleResult find_pole(const ModelConfig& cfg, cplx guess = 0.0, const PoleOptions& opt = {});

// smallest N with N omega > 1; throws DomainError at omega = 1/N
int multiphoton_order(double omega);

// number of zeros of the pole function inside an axis-aligned rectangle (argument principle)
int count_zeros(const ModelConfig& cfg, cplx lo, cplx hi, int samples_per_side = 200, const BranchSpec& spec = {});

// distance from p to the nearest branch point -i - i omega m (bound) or -i omega m (free)
double branch_point_distance(const ModelConfig& cfg, cplx p);

}  // namespace dd
