#pragma once

#include <vector>

#include "ddecay/floquet/poles.hpp"
#include "ddecay/types.hpp"

namespace dd {

enum class InversionMode { direct, decomposition, automatic };

struct InversionOptions {
    InversionMode mode = InversionMode::automatic;
    double tol = 1e-9;            // absolute target for theta
    int max_harmonics = 1500;
    bool parallel = true;
    // decomposition only
    double tilt = 0.0;            // rotation of the cuts below the horizontal
    double direct_until = 150.0;  // automatic mode: direct quadrature for t <= this
};

// theta(t) = 1 - L^{-1}[H](t) on the requested grid.
// direct: Bromwich line Re p = 1/T, folded onto Im p0 in [0, omega) so one Floquet solve serves every
//   harmonic; the first-order (Born) part of H is subtracted with its poles shifted to Re p = -1 and
//   added back in closed form.
// decomposition: Floquet pole residues plus one hairpin integral around the cut images; when the pole
//   is within 4 Gamma of a branch point (resonance) and d t < 10 (d the distance), a keyhole contour
//   replaces both.
SurvivalTrace invert_survival(const ModelConfig& cfg, const std::vector<double>& t_grid,
                              const InversionOptions& opt = {});

// pieces of the decomposition, exposed for tests
struct ResidueSeries {
    cplx xi0{};
    int N = 0;
    std::vector<cplx> R;  // R[n + N]
};
ResidueSeries pole_residues(const ModelConfig& cfg, const PoleResult& pole, double tilt = 0.0, int samples = 64);
// hole > 0: the hairpin starts at |p - b| = hole and a circle of that radius closes it (keyhole), so
// a pole near the branch point is taken along instead of being subtracted as a residue
cplx cut_integral(const ModelConfig& cfg, double t, double tilt = 0.0, double tol = 1e-11, double hole = 0.0);
double keyhole_radius(const ModelConfig& cfg, const PoleResult& pole, double t);

}  // namespace dd
