#pragma once

#include <vector>

#include "ddecay/floquet/poles.hpp"
#include "ddecay/types.hpp"

namespace dd {

// Re xi0 = -r^2 lambda sqrt(omega - 1 - Delta), Im xi0 = Delta = r^2 sigma
struct LambdaSigma {
    double lambda = 0.0;
    double sigma = 0.0;
};
LambdaSigma lambda_sigma(const ModelConfig& cfg, const PoleResult& pole);

// lambda(1), sigma(1): pole-finder values at omega = 1 + delta_k (delta = 0.05 .. 0.2), extrapolated
// quadratically to delta = 0
LambdaSigma lambda_sigma_at_one(Potential pot, double a, double r);

// Two terms of the small-r expansion: e^{xi0 t} plus the branch-point term
//   omega e^{i(omega-1-Delta)t + i pi/4} Re xi0 / (sqrt(pi) (omega^2 - (1+Delta)^2) ((omega-1-Delta)t + 1)^{3/2})
// Throws DomainError in the resonance regime (pole.near_branch_point) or when omega <= 1 + Delta.
cplx theta_asymptotic(const ModelConfig& cfg, const PoleResult& pole, double t);
SurvivalTrace theta_asymptotic_trace(const ModelConfig& cfg, const PoleResult& pole, const std::vector<double>& t);

// Resonance integral, |theta| only (the phase e^{i eps t} is dropped):
//   theta(t) = e^{i pi/4}/pi int e^{-t r^4 lambda1^2 x^2/4} x^2 / ((x^2 - h)^2 + i x^2) dx
// The integrand tends to 1 as |x| -> inf, so t = 0 is a DomainError.
cplx theta_resonance(double r, double t, double h_param, double lambda1);
SurvivalTrace theta_resonance_trace(const ModelConfig& cfg, const std::vector<double>& t, double h_param,
                                    double lambda1);

// omega with omega - 1 = Im xi0(omega): fixed-point steps, then secant. Stops at the last omega for
// which the pole finder still converges (the pole merges with the branch point in the limit).
struct ResonanceTuning {
    double omega = 1.0;
    PoleResult pole;
    double mismatch = 0.0;  // Im xi0 - (omega - 1)
};
ResonanceTuning tune_resonance(Potential pot, double a, double r);

// h minimising the rms of log10|theta|^2 (resonance integral vs trace) over samples with
// t r^4 lambda1^2/4 >= c_min
struct HFit {
    double h = 0.0;
    double rms = 0.0;
    int points = 0;
};
HFit fit_h_param(const SurvivalTrace& trace, double lambda1, double c_min = 1.0, double h_lo = 0.01,
                 double h_hi = 5.0);

}  // namespace dd
