#pragma once

#include <vector>

#include "ddecay/freeparticle/freeparticle.hpp"
#include "ddecay/types.hpp"

namespace dd {

enum class Boundary { hard_wall, absorbing };

struct GridSpec {
    double X = 60.0;   // box [-X, X]
    double dx = 0.05;
    double dt = 0.01;
    Boundary boundary = Boundary::hard_wall;
    double absorb_strength = 2.0;  // -i s ((|x| - (X - w))/w)^2 in the outer layer
    double absorb_width = 10.0;
    // shrink dx so that 0 and the wells +-a fall on nodes (no two-node splitting needed)
    bool snap = true;
};

// X >= 4 k_max T with k_max = sqrt((N + 1) omega - 1), N the multiphoton order (one photon above
// the ionisation threshold); bound-state runs also need dx <= 0.05
double required_half_width(const ModelConfig& cfg, double t_max);
GridSpec default_grid(const ModelConfig& cfg, double t_max, double dx = 0.05, double dt = 0.01);

struct Initial {
    enum class Kind { bound_state, packet };
    Kind kind = Kind::bound_state;
    WavePacket packet;
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<cplx> psi;
};

struct OracleRun {
    SurvivalTrace trace;  // bound-state runs; pipeline tag oracle
    std::vector<double> norm;   // sum |psi|^2 dx at the trace times
    std::vector<double> localization;  // packet runs: int_{-L}^{L} |psi|^2 dx
    double L = 0.0;
    double bound_energy = 0.0;  // discrete bound-state energy
    double worst_drift_rate = 0.0;  // max |norm - 1|/t (hard wall)
    std::vector<Snapshot> snapshots;
    GridSpec grid;
};

struct OracleOptions {
    double sample_dt = 0.5;          // trace spacing
    std::vector<double> snapshot_times;
    double L = -1.0;                 // localization window for packet runs; < 0 means 2a + 5
    double drift_limit = 1e-6;       // per unit time, hard wall only
};

// Crank-Nicolson for i psi_t = (-d^2/dx^2 + V(x, t)) psi with
//   V = -2 delta(x) (binding) + 2 r sin(omega t) sum_j c_j delta(x - x_j),
// delta weights 1/dx on the nearest node (split linearly between two nodes off-grid), H taken at the
// half step. theta(t) = e^{i E_d t} <phi_d, psi(t)> with (E_d, phi_d) the discrete bound state.
// Throws StabilityError on norm drift above drift_limit per unit time (hard wall).
OracleRun evolve_pde(const ModelConfig& cfg, const Initial& init, const GridSpec& grid, double t_max,
                     const OracleOptions& opt = {});

// lowest eigenpair of the discrete unperturbed operator (binding delta only)
struct DiscreteBound {
    double energy = 0.0;
    std::vector<double> x;
    std::vector<double> phi;  // normalised: sum phi^2 dx = 1
    double profile_error = 0.0;  // sup |phi - e^{-|x|}| (phi scaled so phi(0) = 1)
};
DiscreteBound discrete_bound_state(const GridSpec& grid);

struct RichardsonReport {
    std::vector<double> value;  // |theta(t_max)|^2 (or localization) at dx, dx/2, dx/4
    double order = 0.0;
    bool monotone = true;
    double extrapolated = 0.0;
};
RichardsonReport richardson_check(const ModelConfig& cfg, const Initial& init, const GridSpec& grid, double t_max);

}  // namespace dd
