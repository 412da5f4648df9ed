#include "ddecay/timedomain/kernels.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ddecay/branchcore.hpp"
#include "ddecay/errors.hpp"
#include "ddecay/faddeeva.hpp"
#include "ddecay/quadrature.hpp"

namespace dd {

namespace {

const cplx kPhase = std::polar(1.0 / std::sqrt(PI), PI / 4);  // e^{i pi/4}/sqrt(pi)

// i e^{-2a} erfc(z), z = e^{-i pi/4}(a/sqrt(tau) - i sqrt(tau)), written through w so that nothing
// overflows: e^{-2a} e^{-z^2} = e^{i a^2/tau - i tau}
cplx remainder(double a, cplx tau) {
    const cplx st = std::sqrt(tau);
    const cplx z = std::polar(1.0, -PI / 4) * (a / st - I * st);
    const cplx zeta = I * z;
    const cplx ph = std::exp(I * (a * a / tau) - I * tau);
    if (zeta.imag() >= 0.0) return I * ph * faddeeva_w(zeta);
    return 2.0 * I * std::exp(-2.0 * a) - I * ph * faddeeva_w(-zeta);
}

}  // namespace

cplx kernel_time(double a, KernelKind kind, bool binding, cplx tau) {
    if (tau == cplx(0.0, 0.0)) throw BranchPointError("time kernel is singular at tau = 0");
    const cplx st = std::sqrt(tau);
    cplx e = kind == KernelKind::minus ? I * (a * a / tau) : cplx(0.0);
    if (!binding) return kPhase * std::exp(e) / st;
    e -= I * tau;
    return kPhase * std::exp(e) / st + remainder(a, tau);
}

SingularPart singular_part(double a, KernelKind kind, bool binding) {
    (void)binding;
    SingularPart s;
    s.coefficient = kPhase;
    s.chirp = kind == KernelKind::minus ? a * a : 0.0;
    return s;
}

cplx KernelTable::full(std::size_t i) const {
    const double tt = t[i];
    return values[i] + singular.coefficient * std::polar(1.0, singular.chirp / tt) / std::sqrt(tt);
}

cplx kernel_laplace_numeric(double a, KernelKind kind, bool binding, cplx p) {
    const cplx e = std::polar(1.0, -PI / 4);
    if ((p * e).real() <= 0.0) throw DomainError("forward transform needs Re(p e^{-i pi/4}) > 0");
    const double decay = (p * e).real();
    // tau = u^2 e along the ray removes the inverse square root
    auto f = [&](double u) -> cplx {
        if (u == 0.0) {
            return kind == KernelKind::plus || a == 0.0 ? 2.0 * kPhase * std::sqrt(e) : cplx(0.0);
        }
        const cplx tau = u * u * e;
        return std::exp(-p * tau) * kernel_time(a, kind, binding, tau) * e * (2.0 * u);
    };
    const double umax = std::sqrt(40.0 / decay);
    QuadOptions qo;
    qo.abs_tol = 1e-14;
    qo.rel_tol = 1e-13;
    qo.max_panels = 8000;
    const QuadResult q = integrate(f, 0.0, umax, qo);
    return q.value;
}

RoundTrip round_trip_check(double a, KernelKind kind, bool binding, int points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rad(0.3, 4.0), ang(-PI / 4 + 0.2, 3 * PI / 4 - 0.2);
    RoundTrip rt;
    for (int i = 0; i < points; ++i) {
        const cplx p = i == 0 ? cplx(0.0, 3.0) : std::polar(rad(rng), ang(rng));
        cplx exact;
        if (binding) {
            exact = kind == KernelKind::plus ? kernel_k_plus(p, a) : kernel_k_minus(p, a);
        } else {
            const KPair k = free_kernels_from_root(sqrt_minus_ip(p), a);
            exact = kind == KernelKind::plus ? k.same : k.opp;
        }
        const cplx num = kernel_laplace_numeric(a, kind, binding, p);
        const double rel = std::abs(num - exact) / std::max(std::abs(exact), 1e-300);
        if (rel > rt.worst_rel) {
            rt.worst_rel = rel;
            rt.worst_p = p;
        }
    }
    return rt;
}

KernelTable build_kernel_table(double a, KernelKind kind, double t_max, int n_samples, bool binding) {
    if (!(t_max > 0.0)) throw DomainError("t_max must be > 0");
    if (a < 0.0) throw DomainError("a must be >= 0");
    if (n_samples < 8) throw DomainError("need at least 8 samples");
    KernelTable kt;
    kt.a = a;
    kt.kind = kind;
    kt.binding = binding;
    kt.singular = singular_part(a, kind, binding);
    const int n_geo = n_samples / 4, n_uni = n_samples - n_geo;
    const double dt = t_max / n_uni;
    const double t0 = 1e-6 * dt;
    for (int i = 0; i < n_geo; ++i) kt.t.push_back(t0 * std::pow(dt / t0, static_cast<double>(i) / n_geo));
    for (int i = 1; i <= n_uni; ++i) kt.t.push_back(dt * i);
    kt.values.reserve(kt.t.size());
    for (double tt : kt.t) {
        const cplx s = kt.singular.coefficient * std::polar(1.0, kt.singular.chirp / tt) / std::sqrt(tt);
        kt.values.push_back(kernel_time(a, kind, binding, tt) - s);
    }
    const RoundTrip rt = round_trip_check(a, kind, binding);
    if (rt.worst_rel > 1e-6) {
        throw Error("kernel round trip failed: relative error " + std::to_string(rt.worst_rel) + " at p = (" +
                    std::to_string(rt.worst_p.real()) + ", " + std::to_string(rt.worst_p.imag()) + ")");
    }
    return kt;
}

Moments kernel_moments(const KernelFn& K, double h, std::size_t count, bool singular, double chirp) {
    if (!(h > 0.0)) throw DomainError("step must be > 0");
    Moments m;
    m.h = h;
    m.A.resize(count);
    m.B.resize(count);
    const Rule& gl = gauss_legendre8();
    QuadOptions qo;
    qo.abs_tol = 1e-15 * std::sqrt(h);
    qo.rel_tol = 1e-14;
    qo.max_panels = 2000;
    for (std::size_t k = 0; k < count; ++k) {
        const double lo = h * static_cast<double>(k), c = lo + 0.5 * h;
        // phase change of the chirp across one panel
        const bool fast = chirp > 0.0 && k > 0 && chirp * h / (lo * lo) > 0.25;
        const bool arc = (k == 0 && (singular || chirp > 0.0)) || fast;
        if (!arc) {
            cplx A = 0.0, B = 0.0;
            for (std::size_t q = 0; q < gl.x.size(); ++q) {
                const double tau = c + 0.5 * h * gl.x[q];
                const cplx v = K(tau) * (0.5 * h * gl.w[q]);
                const double s = (tau - lo) / h;
                A += v * (1.0 - s);
                B += v * s;
            }
            m.A[k] = A;
            m.B[k] = B;
            continue;
        }
        // tau = c - (h/2) e^{i pi s}, s from 0 to 1 (the lower semicircle); at k = 0, s = u^2 so the
        // endpoint singularity is smoothed. Written without cancellation so tau never crosses the axis.
        const bool sub = k == 0;
        auto point = [&](double u, double& wgt) {
            const double s = sub ? u * u : u;
            const double ds = sub ? 2.0 * u : 1.0;
            const double sn = std::sin(0.5 * PI * s);
            const cplx tau(lo + h * sn * sn, -0.5 * h * std::sin(PI * s));
            const cplx dtau = -0.5 * h * I * PI * std::polar(1.0, PI * s);
            wgt = ds;
            return std::make_pair(tau, dtau);
        };
        auto fa = [&](double u) -> cplx {
            double w;
            auto [tau, dt] = point(u, w);
            if (sub && u == 0.0) return 0.0;
            return K(tau) * dt * w * (1.0 - (tau - lo) / h);
        };
        auto fb = [&](double u) -> cplx {
            double w;
            auto [tau, dt] = point(u, w);
            if (sub && u == 0.0) return 0.0;
            return K(tau) * dt * w * ((tau - lo) / h);
        };
        const QuadResult qa = integrate(fa, 0.0, 1.0, qo);
        const QuadResult qb = integrate(fb, 0.0, 1.0, qo);
        m.A[k] = qa.value;
        m.B[k] = qb.value;
    }
    return m;
}

}  // namespace dd
