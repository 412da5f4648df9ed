#include "ddecay/freeparticle/freeparticle.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <string>

#include "ddecay/analysis/fit.hpp"
#include "ddecay/errors.hpp"
#include "ddecay/quadrature.hpp"
#include "ddecay/timedomain/kernels.hpp"
#include "ddecay/timedomain/volterra.hpp"

namespace dd {

namespace {

const cplx kPhase = std::polar(1.0 / std::sqrt(PI), PI / 4);

double norm_of(const std::function<cplx(double)>& F, double lo, double hi) {
    QuadOptions qo;
    qo.abs_tol = 1e-14;
    qo.rel_tol = 1e-13;
    const QuadResult q = integrate([&](double k) { return cplx(std::norm(F(k))); }, lo, hi, qo);
    return q.value.real();
}

}  // namespace

cplx WavePacket::amplitude(double k) const {
    if (kind == Kind::custom) return (k < k_lo || k > k_hi) ? cplx(0.0) : F(k);
    const double w2 = width * width;
    return std::pow(2.0 * w2 / PI, 0.25) * std::exp(-w2 * (k - momentum) * (k - momentum) - I * k * center);
}

WavePacket make_gaussian(double center, double width, double momentum) {
    if (!(width > 0.0)) throw DomainError("packet width must be > 0");
    WavePacket p;
    p.center = center;
    p.width = width;
    p.momentum = momentum;
    const double span = 12.0 / width;
    p.k_lo = momentum - span;
    p.k_hi = momentum + span;
    p.norm_check = norm_of([&](double k) { return p.amplitude(k); }, p.k_lo, p.k_hi);
    if (std::abs(p.norm_check - 1.0) > 1e-8) throw DomainError("gaussian packet is not normalised");
    return p;
}

WavePacket make_custom(std::function<cplx(double)> F, double k_lo, double k_hi) {
    if (!(k_hi > k_lo)) throw DomainError("custom packet needs k_lo < k_hi");
    WavePacket p;
    p.kind = WavePacket::Kind::custom;
    p.F = std::move(F);
    p.k_lo = k_lo;
    p.k_hi = k_hi;
    p.norm_check = norm_of(p.F, k_lo, k_hi);
    if (std::abs(p.norm_check - 1.0) > 1e-8)
        throw DomainError("custom packet: int |F|^2 dk = " + std::to_string(p.norm_check) + ", not 1");
    return p;
}

cplx free_evolve_quadrature(const WavePacket& packet, double x, double t) {
    if (t < 0.0) throw DomainError("t must be >= 0");
    auto f = [&](double k) { return packet.amplitude(k) * std::exp(I * (k * x - k * k * t)); };
    QuadOptions qo;
    qo.abs_tol = 1e-13;
    qo.rel_tol = 1e-11;
    qo.max_panels = 40000;
    const QuadResult q = integrate(f, packet.k_lo, packet.k_hi, qo);
    if (!q.converged)
        throw ConvergenceError("free evolution quadrature did not converge at t = " + std::to_string(t), q.error);
    return q.value / std::sqrt(2.0 * PI);
}

cplx free_evolve(const WavePacket& packet, double x, double t) {
    if (t < 0.0) throw DomainError("t must be >= 0");
    if (packet.kind == WavePacket::Kind::custom) return free_evolve_quadrature(packet, x, t);
    const double w2 = packet.width * packet.width, k0 = packet.momentum;
    const cplx s(w2, t);
    const double d = x - packet.center;
    const double u = d - 2.0 * k0 * t;
    return std::pow(2.0 * PI * w2, -0.25) * std::sqrt(w2 / s) *
           std::exp(-u * u / (4.0 * s) + I * (k0 * d - k0 * k0 * t));
}

double free_localization(const WavePacket& packet, double L, double t) {
    if (packet.kind == WavePacket::Kind::gaussian) {
        // |psi0|^2 is a normal density with mean x0 + 2 k0 t and variance w^2 (1 + t^2/w^4)
        const double w2 = packet.width * packet.width;
        const double sd = std::sqrt(w2 * (1.0 + t * t / (w2 * w2)));
        const double m = packet.center + 2.0 * packet.momentum * t;
        return 0.5 * (std::erf((L - m) / (std::sqrt(2.0) * sd)) - std::erf((-L - m) / (std::sqrt(2.0) * sd)));
    }
    QuadOptions qo;
    qo.abs_tol = 1e-12;
    const QuadResult q = integrate([&](double x) { return cplx(std::norm(free_evolve(packet, x, t))); }, -L, L, qo);
    return q.value.real();
}

std::vector<std::pair<int, double>> trap_candidates(double a, double omega) {
    if (!(a > 0.0) || !(omega > 0.0)) throw DomainError("trap_candidates needs a > 0 and omega > 0");
    std::vector<std::pair<int, double>> out;
    for (int N = 1;; ++N) {
        const double g0 = -std::pow(PI * N / a, 2);
        if (!(g0 > -omega)) break;
        out.emplace_back(N, g0);
    }
    return out;
}

LocalizationTrace trapped_evolution(const ModelConfig& cfg, const WavePacket& packet, double t_max,
                                    const TrapOptions& opt) {
    cfg.validate();
    if (cfg.potential != Potential::FreeTrap) throw DomainError("trapped_evolution needs the FreeTrap potential");
    const Wells w = wells_of(cfg);
    const double r = cfg.r, om = cfg.omega, h = opt.h;
    const double L = opt.L > 0.0 ? opt.L : 2.0 * cfg.a + 5.0;

    Forcing F = [&](int j, double t) { return free_evolve(packet, w.x[static_cast<std::size_t>(j)], t); };
    Drive eta = [r, om](double t) { return r * std::sin(om * t); };
    VolterraOptions vo;
    vo.parallel = opt.parallel;
    const VolterraState st = solve_volterra_general(cfg, F, eta, physical_kernels(cfg), t_max, h, vo);
    const std::size_t N = st.t.size() - 1;

    // g_j = eta Y_j at the nodes
    std::vector<std::vector<cplx>> g(static_cast<std::size_t>(w.count), std::vector<cplx>(N + 1));
    for (std::size_t k = 0; k <= N; ++k) {
        const double e = r * std::sin(om * st.t[k]);
        g[0][k] = e * st.Yplus[k];
        if (w.count == 2) g[1][k] = e * st.Yminus[k];
    }
    std::size_t M = 1;
    while (M < 2 * (N + 1)) M <<= 1;
    Eigen::FFT<double> fft;
    std::vector<std::vector<cplx>> G(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        std::vector<cplx> buf(M, 0.0);
        std::copy(g[j].begin(), g[j].end(), buf.begin());
        fft.fwd(G[j], buf);
    }

    const std::size_t stride = std::max<std::size_t>(1, opt.output_stride);
    std::vector<std::size_t> keep;
    for (std::size_t n = 0; n <= N; n += stride) keep.push_back(n);

    std::size_t nx = static_cast<std::size_t>(std::ceil(2.0 * L / opt.dx));
    if (nx % 2) ++nx;  // Simpson needs an even number of intervals
    const double dx = 2.0 * L / static_cast<double>(nx);
    std::vector<double> xs(nx + 1);
    for (std::size_t i = 0; i <= nx; ++i) xs[i] = -L + dx * static_cast<double>(i);

    const std::size_t late = keep.size() - std::max<std::size_t>(1, keep.size() / 4);
    std::vector<std::vector<double>> dens(nx + 1, std::vector<double>(keep.size()));
    std::vector<double> prof(nx + 1, 0.0);
    const bool demodulate = !std::isnan(opt.g0);

#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (std::size_t i = 0; i <= nx; ++i) {
        Eigen::FFT<double> ffx;
        const double x = xs[i];
        std::vector<cplx> acc(M, 0.0), W(M), Wf, conv;
        // node 0 only carries B_{n-1}, so A_n g_0 comes off the full convolution
        std::vector<cplx> edge(keep.size(), 0.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double d = x - w.x[j];
            const double q = d * d / 4.0;
            KernelFn K = [q](cplx tau) { return kPhase * std::exp(I * (q / tau)) / std::sqrt(tau); };
            const Moments m = kernel_moments(K, h, N + 1, true, q);
            std::fill(W.begin(), W.end(), cplx(0.0));
            for (std::size_t dd = 0; dd <= N; ++dd) W[dd] = m.A[dd] + (dd > 0 ? m.B[dd - 1] : cplx(0.0));
            ffx.fwd(Wf, W);
            for (std::size_t k = 0; k < M; ++k) acc[k] += w.c[j] * Wf[k] * G[j][k];
            for (std::size_t o = 0; o < keep.size(); ++o) edge[o] += w.c[j] * m.A[keep[o]] * g[j][0];
        }
        ffx.inv(conv, acc);
        cplx demod = 0.0;
        double mean_abs = 0.0;
        for (std::size_t o = 0; o < keep.size(); ++o) {
            const std::size_t n = keep[o];
            const cplx psi = free_evolve(packet, x, st.t[n]) - (conv[n] - edge[o]);
            dens[i][o] = std::norm(psi);
            if (o >= late) {
                mean_abs += std::abs(psi);
                if (demodulate) demod += psi * std::polar(1.0, -(opt.g0 + opt.harmonic * om) * st.t[n]);
            }
        }
        prof[i] = (demodulate ? std::abs(demod) : mean_abs) / static_cast<double>(keep.size() - late);
    }

    LocalizationTrace tr;
    tr.config = cfg;
    tr.L = L;
    tr.x = xs;
    tr.profile = prof;
    for (std::size_t o = 0; o < keep.size(); ++o) {
        double s = 0.0;
        for (std::size_t i = 0; i <= nx; ++i) {
            const double wt = (i == 0 || i == nx) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            s += wt * dens[i][o];
        }
        tr.t.push_back(st.t[keep[o]]);
        tr.probability.push_back(s * dx / 3.0);
        tr.psi_plus.push_back(st.Yplus[keep[o]]);
        tr.psi_minus.push_back(w.count == 2 ? st.Yminus[keep[o]] : cplx(0.0));
    }
    return tr;
}

ProfileFit fit_profile(const LocalizationTrace& tr, double g0, double margin, double span) {
    const double a = tr.config.a;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < tr.x.size(); ++i) {
        if (tr.x[i] >= a - span && tr.x[i] <= a - margin && tr.profile[i] > 0.0) {
            x.push_back(tr.x[i]);
            y.push_back(std::log(tr.profile[i]));
        }
    }
    if (x.size() < 3) throw DomainError("profile fit window holds fewer than three samples");
    const LineFit f = least_squares(x, y);
    ProfileFit pf;
    pf.slope = f.slope;
    pf.expected = std::sqrt(g0 + tr.config.omega);
    pf.rel_error = std::abs(pf.slope - pf.expected) / pf.expected;
    return pf;
}

}  // namespace dd
