#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ddecay/branchcore.hpp"

namespace dd {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;      // measured worst deviation (or statistic)
    double tolerance = 0.0;
    std::string detail;      // worst point, failing sub-case
};

// Track sqrt(1 - ip) (bound) or sqrt(-ip) (free) by continuation along a circle of radius rho around
// the branch point, from one side of the cut to the other, and compare with the library value at every
// step and with the side = above / below limits at both ends. corrupt_below flips the sign of the
// below-side reference (negative control).
CheckResult check_branch_continuity(Cut cut, bool free, double rho = 0.5, bool corrupt_below = false);
// k+ sqrt(1 - ip) - k- = 1 at random p off the cuts
CheckResult check_kernel_identity(int points = 200, std::uint64_t seed = 11);

struct ValidateOptions {
    double tol = 1e-9;              // Laplace target; agreement thresholds scale with it
    double agreement = 1e-3;        // Laplace vs Volterra relative |theta|^2
    double volterra_h = 0.01;
    double oracle_dx = 0.05;
    bool include_oracle = true;
    bool corrupt_branch = false;    // negative control
};

// the cross-pipeline invariant suite behind `ddecay validate`
std::vector<CheckResult> run_property_suite(const ValidateOptions& opt = {});

}  // namespace dd
