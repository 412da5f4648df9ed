#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddecay/types.hpp"

namespace dd {

enum class StabMode { bound, free };

struct StabilizationPoint {
    Potential potential = Potential::U1;
    double a = 0.0;
    double omega = 0.0;
    double r_s = 0.0;
    double g0 = 0.0;
    int N = 1;
    double residual = 0.0;
    // the solvability inequalities k1 k2 >= 2 k3 (2 k3 - k2), k1 k2 >= k3 (4 k3 - k2) at g0.
    // Reported, not used as a gate: decaying solutions are found where they fail narrowly.
    bool inequalities_hold = false;
};

// k_n on the imaginary axis p = i(g0 + omega n), n >= 1 (real there).
// U2 and FreeTrap: k_n = k+_n + (-1)^{n+1} k-_n (same/opposite well kernels); U1: k_n = k+_n.
double stabilization_coefficient(const ModelConfig& cfg, double g0, int n);

// rho_1 = 2/(r k_1), rho_n = 2/(r k_n) - 1/rho_{n-1}; returns rho_1..rho_{n_max}.
// Throws DomainError when some rho_{n-1} vanishes.
std::vector<double> rho_recursion(const ModelConfig& cfg, double g0, double r, int n_max);

// 1 - (r k_1/2) rho^min_1 where rho^min is the decaying (minimal) solution obtained by running the
// recursion backwards from rho = 0 at n_max. Zero exactly when the forward seed is the decaying one.
double matching_defect(const ModelConfig& cfg, double g0, double r, int n_max = 80);

bool check_inequalities(const ModelConfig& cfg, double g0);

// energy of the harmonic-0 condition:
//   U2: a sqrt(-1 - g0) = pi N;  FreeTrap: g0 = -(pi N/a)^2;
//   U1: k+(i g0) = 0, i.e. e^{-2 a kappa} = 1 - kappa with kappa = sqrt(1 + g0), which needs a > 1/2
//       and has the single solution N = 1.
// Returns nullopt when no such g0 exists.
std::optional<double> stabilization_g0(Potential pot, double a, int N);

// r_s at fixed (a, omega, N) by a log-grid scan of the matching defect over r in [1e-3, 20];
// the smallest accepted root is returned
std::optional<StabilizationPoint> stabilization_search(Potential pot, double a, double omega, int N,
                                                       std::string* diagnostic = nullptr);
std::optional<StabilizationPoint> stabilization_search(double a, double omega, int N, StabMode mode,
                                                       std::string* diagnostic = nullptr);
// every admissible N
std::vector<StabilizationPoint> stabilization_search_all(Potential pot, double a, double omega);

// omega_s at fixed (a, r, N): scan of the matching defect over omega in (omega_lo, omega_hi)
std::vector<StabilizationPoint> stabilizing_frequencies(Potential pot, double a, double r, int N, double omega_lo,
                                                        double omega_hi, int samples = 400);

}  // namespace dd
