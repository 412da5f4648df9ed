#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "ddecay/floquet/stabilization.hpp"
#include "ddecay/types.hpp"

namespace dd {

// psi(x, 0) = int F(k) u(k, x) dk, u = (2 pi)^{-1/2} e^{ikx}
struct WavePacket {
    enum class Kind { gaussian, custom };
    Kind kind = Kind::gaussian;
    // gaussian: psi(x, 0) = (2 pi w^2)^{-1/4} exp(-(x - x0)^2/(4 w^2) + i k0 (x - x0))
    double center = 0.0, width = 1.0, momentum = 0.0;
    // custom: F on [k_lo, k_hi]
    std::function<cplx(double)> F;
    double k_lo = -10.0, k_hi = 10.0;
    double norm_check = 0.0;  // int |F|^2 dk, filled by make_*

    cplx amplitude(double k) const;  // F(k)
};
// throws DomainError when int |F|^2 dk differs from 1 by more than 1e-8
WavePacket make_gaussian(double center = 0.0, double width = 1.0, double momentum = 0.0);
WavePacket make_custom(std::function<cplx(double)> F, double k_lo, double k_hi);

// psi0(x, t) = int F(k) u(k, x) e^{-i k^2 t} dk: closed form for the gaussian kind, adaptive
// quadrature otherwise
cplx free_evolve(const WavePacket& packet, double x, double t);
cplx free_evolve_quadrature(const WavePacket& packet, double x, double t);

// int_{-L}^{L} |psi0|^2 dx (closed form for gaussians)
double free_localization(const WavePacket& packet, double L, double t);

// (N, g0) with g0 = -(pi N/a)^2 in (-omega, 0); empty when a <= pi/sqrt(omega)
std::vector<std::pair<int, double>> trap_candidates(double a, double omega);

struct TrapOptions {
    double h = 0.05;             // time step of the Volterra march
    double dx = 0.1;             // spatial step of the localization integral
    double L = -1.0;             // window half-width; < 0 means 2a + 5
    std::size_t output_stride = 10;  // keep every stride-th time node
    bool parallel = true;
    // profile: demodulate psi(x, t) at the trapped frequency g0 + m omega over the last quarter of
    // the run (this removes the slowly spreading continuum part); NaN means plain time-averaged |psi|
    double g0 = std::numeric_limits<double>::quiet_NaN();
    int harmonic = 1;
};

struct LocalizationTrace {
    ModelConfig config;
    double L = 0.0;
    std::vector<double> t;
    std::vector<double> probability;       // int_{-L}^{L} |psi(x, t)|^2 dx
    std::vector<cplx> psi_plus, psi_minus;  // psi(+a, t), psi(-a, t)
    // late-time profile on x in [-L, L] (see TrapOptions::g0)
    std::vector<double> x;
    std::vector<double> profile;
};

// psi(+-a, t) from the free-kernel Volterra system with source psi0(+-a, t), then
//   psi(x, t) = psi0(x, t) - sum_j c_j int_0^t K(x - x_j, t - s) eta(s) psi(x_j, s) ds,
//   K(d, tau) = e^{i pi/4 + i d^2/(4 tau)}/sqrt(pi tau),
// with the convolutions done by FFT on the product-integration weights.
LocalizationTrace trapped_evolution(const ModelConfig& cfg, const WavePacket& packet, double t_max,
                                    const TrapOptions& opt = {});

// log|psi| slope of profile between the wells, fitted on x in [a - span, a - margin]; compared with
// the leading exponent sqrt(g0 + omega)
struct ProfileFit {
    double slope = 0.0;
    double expected = 0.0;
    double rel_error = 0.0;
};
ProfileFit fit_profile(const LocalizationTrace& tr, double g0, double margin = 0.5, double span = 2.5);

}  // namespace dd
