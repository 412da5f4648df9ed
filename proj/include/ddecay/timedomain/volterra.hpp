#pragma once

#include <functional>
#include <vector>

#include "ddecay/timedomain/kernels.hpp"
#include "ddecay/types.hpp"

namespace dd {

// Volterra system for the values Y_i(t) at the wells (slot order of wells_of):
//   Y_i(t) = F_i(t) - sum_j c_j int_0^t K_ij(t - s) eta(s) Y_j(s) ds,   eta = r sin(omega t)
// K_ii is the same-well kernel, K_ij (i != j) the opposite-well one. For the bound-state problem
// F_i = u_i and Y_i = e^{-it} psi(x_i, t).
struct KernelPair {
    KernelFn same, opp;
    bool singular = true;  // ~ tau^{-1/2} at 0
    double chirp = 0.0;    // q in e^{i q/tau}
};
KernelPair physical_kernels(const ModelConfig& cfg);

using Forcing = std::function<cplx(int well, double t)>;
using Drive = std::function<double(double t)>;

struct VolterraOptions {
    bool parallel = true;
    int block = 128;
    // step-halving: also march with h/2 (and h/4 when an order estimate is needed), compare at the
    // coarse nodes and return the Richardson combination of the two finest runs
    bool halving = false;
    double halving_tol = 1e-4;
    double min_order = 1.5;
};

struct VolterraState {
    ModelConfig config;
    double h = 0.0;
    std::vector<double> t;
    std::vector<cplx> Yplus;   // well at +a (slot 0)
    std::vector<cplx> Yminus;  // well at -a (slot 1); empty for a single well
    double halving_discrepancy = 0.0;
    double observed_order = 0.0;
};

// bound-state problem; h must resolve the drive (h <= 2 pi/(40 omega))
VolterraState solve_volterra(const ModelConfig& cfg, double t_max, double h, const VolterraOptions& opt = {});

// general forcing, drive and kernels (manufactured solutions, the free trap)
VolterraState solve_volterra_general(const ModelConfig& cfg, const Forcing& F, const Drive& eta, const KernelPair& K,
                                     double t_max, double h, const VolterraOptions& opt = {});

// theta(t) = 1 - 2i sum_j c_j u_j int_0^t eta(s) Y_j(s) ds, third-order cumulative rule
SurvivalTrace survival_from_Y(const VolterraState& st);

}  // namespace dd
