#include "ddecay/floquet/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddecay/errors.hpp"

namespace dd {

namespace {

cplx root_for(const ModelConfig& cfg, cplx p, int n, const BranchSpec& spec, const std::optional<CutEval>& cut) {
    if (cut && cut->n_star == n && cut->offset) {
        // bound: 1 - i(-i - i omega n + e) = -i e; free: -i(-i omega n + e) = -i e
        return branch_sqrt(-I * *cut->offset, spec);
    }
    if (cut && cut->n_star == n) {
        const double psi = PI / 2 + spec.tilt;
        const cplx w = spec.tilt == 0.0 ? cplx(0.0, cut->s) : std::polar(cut->s, psi);
        BranchSpec on = spec;
        on.side = cut->side;
        return branch_sqrt(w, on);
    }
    const cplx w = cfg.binding ? 1.0 - I * p : -I * p;
    return branch_sqrt(w, spec);
}

}  // namespace

Mat2 kernel_matrix(const ModelConfig& cfg, const Wells& w, cplx p0, int n, const BranchSpec& spec,
                   const std::optional<CutEval>& cut) {
    const cplx p = p0 + I * (cfg.omega * n);
    const cplx kappa = root_for(cfg, p, n, spec, cut);
    const KPair k = cfg.binding ? bound_kernels_from_root(kappa, cfg.a) : free_kernels_from_root(kappa, cfg.a);
    Mat2 m = Mat2::Zero();
    for (int i = 0; i < w.count; ++i)
        for (int j = 0; j < w.count; ++j) m(i, j) = -w.c[j] * (i == j ? k.same : k.opp);
    return m;
}

FloquetSystem build_system(const ModelConfig& cfg, cplx p0, std::pair<int, int> window, const BranchSpec& spec,
                           const std::optional<CutEval>& cut) {
    cfg.validate();
    if (window.first > 0 || window.second < 0 || window.first >= window.second)
        throw DomainError("Floquet window must contain n = 0");
    FloquetSystem sys;
    sys.config = cfg;
    sys.wells = wells_of(cfg);
    sys.p0 = p0;
    sys.n_min = window.first;
    sys.n_max = window.second;
    const std::size_t len = static_cast<std::size_t>(sys.n_max - sys.n_min + 1);
    sys.blocks.resize(len);
    sys.sources.resize(len);
    const cplx scale = -I * (0.5 * cfg.r);
    for (int n = sys.n_min; n <= sys.n_max; ++n) {
        const std::size_t idx = static_cast<std::size_t>(n - sys.n_min);
        const cplx p = p0 + I * (cfg.omega * n);
        try {
            sys.blocks[idx] = cfg.r == 0.0 ? Mat2::Zero() : Mat2(scale * kernel_matrix(cfg, sys.wells, p0, n, spec, cut));
        } catch (const Error& e) {
            throw DomainError("kernel singular at harmonic n = " + std::to_string(n) + ": " + e.what());
        }
        if (p == cplx(0.0, 0.0) && (sys.wells.u[0] != 0.0 || sys.wells.u[1] != 0.0))
            throw DomainError("source pole at harmonic n = " + std::to_string(n));
        Vec2 s = Vec2::Zero();
        for (int i = 0; i < sys.wells.count; ++i) s(i) = sys.wells.u[i] / p;
        sys.sources[idx] = s;
    }
    return sys;
}

FloquetSolution solve_inhomogeneous(const FloquetSystem& sys) {
    // alpha_n = -B_n, recurrence y_n + alpha_n (y_{n-1} - y_{n+1}) = s_n
    const int N1 = sys.n_max, N0 = sys.n_min;
    const Mat2 Id = Mat2::Identity();
    std::vector<Mat2> A(static_cast<std::size_t>(N1 + 2), Mat2::Zero());
    std::vector<Vec2> av(static_cast<std::size_t>(N1 + 2), Vec2::Zero());
    for (int n = N1; n >= 1; --n) {
        const Mat2 al = -sys.block(n);
        const Mat2 Dinv = (Id - al * A[static_cast<std::size_t>(n + 1)]).inverse();
        A[static_cast<std::size_t>(n)] = -Dinv * al;
        av[static_cast<std::size_t>(n)] = Dinv * (sys.source(n) + al * av[static_cast<std::size_t>(n + 1)]);
    }
    const std::size_t nneg = static_cast<std::size_t>(-N0 + 2);
    std::vector<Mat2> B(nneg, Mat2::Zero());   // B[-n] for n <= -1, B[-N0 + 1] = closure
    std::vector<Vec2> bv(nneg, Vec2::Zero());
    auto bi = [](int n) { return static_cast<std::size_t>(-n); };
    for (int n = N0; n <= -1; ++n) {
        const Mat2 al = -sys.block(n);
        const Mat2 Bprev = n == N0 ? Mat2::Zero() : B[bi(n - 1)];
        const Vec2 bprev = n == N0 ? Vec2::Zero() : bv[bi(n - 1)];
        const Mat2 Einv = (Id + al * Bprev).inverse();
        B[bi(n)] = Einv * al;
        bv[bi(n)] = Einv * (sys.source(n) - al * bprev);
    }
    const Mat2 al0 = -sys.block(0);
    const Mat2 Bm1 = N0 <= -1 ? B[bi(-1)] : Mat2::Zero();
    const Vec2 bm1 = N0 <= -1 ? bv[bi(-1)] : Vec2::Zero();
    const Mat2 A1 = N1 >= 1 ? A[1] : Mat2::Zero();
    const Vec2 a1 = N1 >= 1 ? av[1] : Vec2::Zero();
    const Mat2 lhs = Id + al0 * (Bm1 - A1);
    const Vec2 rhs = sys.source(0) - al0 * (bm1 - a1);

    FloquetSolution sol;
    sol.n_min = N0;
    sol.n_max = N1;
    sol.window = std::min(-N0, N1);
    sol.y.assign(static_cast<std::size_t>(N1 - N0 + 1), Vec2::Zero());
    auto Y = [&](int n) -> Vec2& { return sol.y[static_cast<std::size_t>(n - N0)]; };
    Y(0) = lhs.partialPivLu().solve(rhs);
    for (int n = 1; n <= N1; ++n) Y(n) = A[static_cast<std::size_t>(n)] * Y(n - 1) + av[static_cast<std::size_t>(n)];
    for (int n = -1; n >= N0; --n) Y(n) = B[bi(n)] * Y(n + 1) + bv[bi(n)];

    double res = 0.0;
    for (int n = N0; n <= N1; ++n) {
        const Vec2 ym = n > N0 ? Y(n - 1) : Vec2::Zero();
        const Vec2 yp = n < N1 ? Y(n + 1) : Vec2::Zero();
        const Vec2 rr = Y(n) - sys.block(n) * (ym - yp) - sys.source(n);
        res = std::max(res, rr.cwiseAbs().maxCoeff());
    }
    sol.residual = res;
    return sol;
}

FloquetSolution solve_converged(const ModelConfig& cfg, cplx p0, int keep, double tol, const BranchSpec& spec,
                                const std::optional<CutEval>& cut) {
    int margin = 8;
    FloquetSolution prev = solve_inhomogeneous(build_system(cfg, p0, {-(keep + 1 + margin), keep + 1 + margin}, spec, cut));
    double last = 0.0;
    for (int it = 0; it < 10; ++it) {
        margin *= 2;
        FloquetSolution cur =
            solve_inhomogeneous(build_system(cfg, p0, {-(keep + 1 + margin), keep + 1 + margin}, spec, cut));
        double diff = 0.0, scale = 0.0;
        for (int n = -(keep + 1); n <= keep + 1; ++n) {
            diff = std::max(diff, (cur.at(n) - prev.at(n)).cwiseAbs().maxCoeff());
            scale = std::max(scale, cur.at(n).cwiseAbs().maxCoeff());
        }
        last = diff / std::max(scale, 1e-300);
        if (last < tol) {
            cur.change = last;
            return cur;
        }
        prev = std::move(cur);
    }
    throw ConvergenceError("Floquet window doubling did not converge", last);
}

std::vector<cplx> h_harmonics(const ModelConfig& cfg, cplx p0, const FloquetSolution& sol, int keep) {
    const Wells w = wells_of(cfg);
    std::vector<cplx> h(static_cast<std::size_t>(2 * keep + 1));
    for (int n = -keep; n <= keep; ++n) {
        const cplx p = p0 + I * (cfg.omega * n);
        const Vec2 d = sol.get(n - 1) - sol.get(n + 1);
        cplx s = 0.0;
        for (int j = 0; j < w.count; ++j) s += w.c[j] * w.u[j] * d(j);
        h[static_cast<std::size_t>(n + keep)] = cfg.r / p * s;
    }
    return h;
}

cplx pole_function(const ModelConfig& cfg, cplx p0, int half_window, const BranchSpec& spec) {
    const Wells w = wells_of(cfg);
    const Mat2 Id = Mat2::Identity();
    const cplx scale = I * (0.5 * cfg.r);
    Mat2 A = Mat2::Zero();
    for (int n = half_window; n >= 1; --n) {
        const Mat2 al = scale * kernel_matrix(cfg, w, p0, n, spec);
        A = -(Id - al * A).inverse() * al;
    }
    Mat2 B = Mat2::Zero();
    for (int n = -half_window; n <= -1; ++n) {
        const Mat2 al = scale * kernel_matrix(cfg, w, p0, n, spec);
        B = (Id + al * B).inverse() * al;
    }
    const Mat2 al0 = scale * kernel_matrix(cfg, w, p0, 0, spec);
    Mat2 L = Id + al0 * (B - A);
    if (w.count == 1) return (cfg.binding ? p0 : cplx(1.0)) * L(0, 0);
    return (cfg.binding ? p0 : cplx(1.0)) * L.determinant();
}

}  // namespace dd
