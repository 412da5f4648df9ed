#include "ddecay/timedomain/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddecay/errors.hpp"
#include "ddecay/parallel.hpp"

namespace dd {

namespace {

struct Channel {
    std::vector<cplx> W;  // W[0] = A_0, W[d] = A_d + B_{d-1}
    std::vector<cplx> B;  // end weight for j = 0 is B[n - 1]
};

Channel make_channel(const Moments& s, const Moments* o, double sign) {
    const std::size_t n = s.A.size();
    Channel ch;
    ch.W.resize(n + 1, 0.0);
    ch.B.resize(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) {
        const cplx A = s.A[d] + (o ? sign * o->A[d] : 0.0);
        const cplx B = s.B[d] + (o ? sign * o->B[d] : 0.0);
        ch.W[d] += A;
        ch.W[d + 1] += B;
        ch.B[d] = B;
    }
    return ch;
}

struct Marched {
    std::vector<cplx> y0, y1;
};

// One march on the uniform grid t_n = n h, n = 0..steps.
// Two wells sit at +-a, so the convolutions diagonalise in the channels g0 +- g1 with kernels
// same +- opp; one well uses the same-well kernel only.
Marched march(const Wells& w, const Forcing& F, const Drive& eta, const KernelPair& K, std::size_t steps, double h,
              const VolterraOptions& opt) {
    const bool two = w.count == 2;
    // the same-well kernel of the bound problem chirps too, through its remainder term
    const Moments ms = kernel_moments(K.same, h, steps, K.singular, K.chirp);
    Moments mo;
    if (two) mo = kernel_moments(K.opp, h, steps, K.singular, K.chirp);
    const Channel cp = make_channel(ms, two ? &mo : nullptr, 1.0);
    const Channel cm = two ? make_channel(ms, &mo, -1.0) : Channel{};
    const cplx Ws = ms.A[0], Wo = two ? mo.A[0] : cplx(0.0);

    Marched out;
    out.y0.assign(steps + 1, 0.0);
    if (two) out.y1.assign(steps + 1, 0.0);
    std::vector<cplx> gp(steps + 1, 0.0), gm(two ? steps + 1 : 0, 0.0);
    out.y0[0] = F(0, 0.0);
    if (two) out.y1[0] = F(1, 0.0);
    {
        const double e0 = eta(0.0);
        const cplx g0 = w.c[0] * e0 * out.y0[0], g1 = two ? w.c[1] * e0 * out.y1[0] : cplx(0.0);
        gp[0] = g0 + g1;
        if (two) gm[0] = g0 - g1;
    }
    const std::size_t block = static_cast<std::size_t>(std::max(1, opt.block));
    std::vector<cplx> hp, hm;
    for (std::size_t b0 = 1; b0 <= steps; b0 += block) {
        const std::size_t b1 = std::min(steps + 1, b0 + block);
        hp.assign(b1 - b0, 0.0);
        if (two) hm.assign(b1 - b0, 0.0);
        // history from nodes 1..b0-1 for the whole block (hook for a block-FFT product)
        if (b0 > 1) {
            if (opt.parallel) {
                history_parallel(cp.W, gp, 1, b0, b0, b1, hp);
                if (two) history_parallel(cm.W, gm, 1, b0, b0, b1, hm);
            } else {
                history_serial(cp.W, gp, 1, b0, b0, b1, hp);
                if (two) history_serial(cm.W, gm, 1, b0, b0, b1, hm);
            }
        }
        for (std::size_t n = b0; n < b1; ++n) {
            const std::size_t i = n - b0;
            cplx sp = hp[i] + cp.B[n - 1] * gp[0];
            cplx sm = two ? hm[i] + cm.B[n - 1] * gm[0] : cplx(0.0);
            for (std::size_t j = b0; j < n; ++j) {
                sp += cp.W[n - j] * gp[j];
                if (two) sm += cm.W[n - j] * gm[j];
            }
            const double tn = h * static_cast<double>(n);
            const double e = eta(tn);
            if (!two) {
                const cplx rhs = F(0, tn) - sp;
                out.y0[n] = rhs / (1.0 + e * w.c[0] * Ws);
                gp[n] = w.c[0] * e * out.y0[n];
                continue;
            }
            const cplx r0 = F(0, tn) - 0.5 * (sp + sm);
            const cplx r1 = F(1, tn) - 0.5 * (sp - sm);
            const cplx m00 = 1.0 + e * w.c[0] * Ws, m01 = e * w.c[1] * Wo;
            const cplx m10 = e * w.c[0] * Wo, m11 = 1.0 + e * w.c[1] * Ws;
            const cplx det = m00 * m11 - m01 * m10;
            out.y0[n] = (m11 * r0 - m01 * r1) / det;
            out.y1[n] = (m00 * r1 - m10 * r0) / det;
            const cplx g0 = w.c[0] * e * out.y0[n], g1 = w.c[1] * e * out.y1[n];
            gp[n] = g0 + g1;
            gm[n] = g0 - g1;
        }
    }
    return out;
}

double max_diff_coarse(const std::vector<cplx>& coarse, const std::vector<cplx>& fine) {
    double d = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) d = std::max(d, std::abs(coarse[i] - fine[2 * i]));
    return d;
}

}  // namespace

KernelPair physical_kernels(const ModelConfig& cfg) {
    const double a = cfg.a;
    const bool b = cfg.binding;
    KernelPair k;
    k.same = [a, b](cplx tau) { return kernel_time(a, KernelKind::plus, b, tau); };
    k.opp = [a, b](cplx tau) { return kernel_time(a, KernelKind::minus, b, tau); };
    k.singular = true;
    k.chirp = a * a;
    return k;
}

VolterraState solve_volterra_general(const ModelConfig& cfg, const Forcing& F, const Drive& eta, const KernelPair& K,
                                     double t_max, double h, const VolterraOptions& opt) {
    cfg.validate();
    if (!(h > 0.0) || !(t_max > 0.0)) throw DomainError("need h > 0 and t_max > 0");
    const Wells w = wells_of(cfg);
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_max / h));
    if (steps < 2) throw DomainError("t_max must span at least two steps");
    VolterraState st;
    st.config = cfg;
    auto fill = [&](const Marched& m, double hh, std::size_t n) {
        st.h = hh;
        st.t.resize(n + 1);
        for (std::size_t i = 0; i <= n; ++i) st.t[i] = hh * static_cast<double>(i);
        st.Yplus = m.y0;
        st.Yminus = m.y1;
    };
    auto run = [&](double hh, std::size_t n) {
        return march(w, F, eta, K, n, hh, opt);
    };
    const Marched m1 = run(h, steps);
    if (!opt.halving) {
        fill(m1, h, steps);
        return st;
    }
    const Marched m2 = run(0.5 * h, 2 * steps);
    const Marched m4 = run(0.25 * h, 4 * steps);
    double d12 = max_diff_coarse(m1.y0, m2.y0);
    double d24 = max_diff_coarse(m2.y0, m4.y0);
    if (w.count == 2) {
        d12 = std::max(d12, max_diff_coarse(m1.y1, m2.y1));
        d24 = std::max(d24, max_diff_coarse(m2.y1, m4.y1));
    }
    // d24 compares h/2 and h/4 on the h/2 grid
    const double order = (d24 > 0.0 && d12 > 0.0) ? std::log2(d12 / d24) : 99.0;
    st.halving_discrepancy = d24;
    st.observed_order = order;
    if (order < opt.min_order && d24 > 1e-13)
        throw RefinementError("step halving: observed order " + std::to_string(order) + " below " +
                                  std::to_string(opt.min_order),
                              order);
    if (d24 > opt.halving_tol)
        throw RefinementError("step-halving discrepancy " + std::to_string(d24) + " above tolerance", order);
    // Richardson on the h/2 grid
    Marched rich;
    const double f = 4.0;  // second-order product rule
    rich.y0.resize(2 * steps + 1);
    for (std::size_t i = 0; i <= 2 * steps; ++i) rich.y0[i] = m4.y0[2 * i] + (m4.y0[2 * i] - m2.y0[i]) / (f - 1.0);
    if (w.count == 2) {
        rich.y1.resize(2 * steps + 1);
        for (std::size_t i = 0; i <= 2 * steps; ++i)
            rich.y1[i] = m4.y1[2 * i] + (m4.y1[2 * i] - m2.y1[i]) / (f - 1.0);
    }
    fill(rich, 0.5 * h, 2 * steps);
    return st;
}

VolterraState solve_volterra(const ModelConfig& cfg, double t_max, double h, const VolterraOptions& opt) {
    cfg.validate();
    if (!cfg.binding) throw DomainError("solve_volterra is the bound-state problem; use solve_volterra_general");
    if (h > 2.0 * PI / (40.0 * cfg.omega) * (1.0 + 1e-12))
        throw DomainError("step " + std::to_string(h) + " does not resolve the drive (need h <= 2 pi/(40 omega))");
    const Wells w = wells_of(cfg);
    const double r = cfg.r, om = cfg.omega;
    Forcing F = [w](int j, double) { return cplx(w.u[static_cast<std::size_t>(j)]); };
    Drive eta = [r, om](double t) { return r * std::sin(om * t); };
    return solve_volterra_general(cfg, F, eta, physical_kernels(cfg), t_max, h, opt);
}

SurvivalTrace survival_from_Y(const VolterraState& st) {
    const ModelConfig& cfg = st.config;
    if (!cfg.binding) throw DomainError("survival amplitude needs the bound state");
    const Wells w = wells_of(cfg);
    const std::size_t n = st.t.size();
    std::vector<cplx> f(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = cfg.r * std::sin(cfg.omega * st.t[i]);
        cplx s = w.c[0] * w.u[0] * st.Yplus[i];
        if (w.count == 2) s += w.c[1] * w.u[1] * st.Yminus[i];
        f[i] = e * s;
    }
    SurvivalTrace tr;
    tr.t = st.t;
    tr.config = cfg;
    tr.pipeline = Pipeline::volterra;
    tr.theta.assign(n, 1.0);
    const double h = st.h;
    cplx acc = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        if (n < 3) {
            acc += 0.5 * h * (f[k] + f[k - 1]);
        } else if (k == 1) {
            acc += h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
        } else {
            acc += h / 12.0 * (5.0 * f[k] + 8.0 * f[k - 1] - f[k - 2]);
        }
        tr.theta[k] = 1.0 - 2.0 * I * acc;
    }
    return tr;
}

}  // namespace dd
