#include "ddecay/floquet/poles.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ddecay/errors.hpp"
#include "ddecay/floquet/recurrence.hpp"

namespace dd {

namespace {

struct Evaluated {
    cplx f;
    int window;
};

// truncation doubled until the determinant is stable
Evaluated eval_converged(const ModelConfig& cfg, cplx p, const BranchSpec& spec) {
    int n = 16;
    cplx prev = pole_function(cfg, p, n, spec);
    for (int it = 0; it < 8; ++it) {
        n *= 2;
        const cplx cur = pole_function(cfg, p, n, spec);
        if (std::abs(cur - prev) <= 1e-15 * std::max(1.0, std::abs(cur))) return {cur, n};
        prev = cur;
    }
    return {prev, n};
}

struct SecantOut {
    cplx x;
    cplx fx;
    bool ok;
    int window;
};

SecantOut secant(const ModelConfig& cfg, cplx x0, cplx x1, const PoleOptions& opt, double scale) {
    Evaluated e0 = eval_converged(cfg, x0, opt.spec);
    Evaluated e1 = eval_converged(cfg, x1, opt.spec);
    for (int it = 0; it < opt.max_iter; ++it) {
        const cplx df = e1.f - e0.f;
        const double ref = std::max(std::abs(x1), scale);
        // at the rounding floor f stops changing; accept if the last step was already tiny
        if (df == cplx(0.0, 0.0)) return {x1, e1.f, std::abs(x1 - x0) <= 1e-9 * ref, e1.window};
        const cplx x2 = x1 - e1.f * (x1 - x0) / df;
        if (!std::isfinite(x2.real()) || !std::isfinite(x2.imag())) break;
        const double prev_step = std::abs(x1 - x0);
        const double prev_f = std::abs(e1.f);
        x0 = x1;
        e0 = e1;
        x1 = x2;
        e1 = eval_converged(cfg, x1, opt.spec);
        const double step = std::abs(x1 - x0);
        if (step <= opt.tol * ref) return {x1, e1.f, true, e1.window};
        if (step <= 1e-9 * ref && prev_step <= 1e-9 * ref && std::abs(e1.f) >= prev_f)
            return {x0, e0.f, true, e0.window};
    }
    return {x1, e1.f, false, e1.window};
}

cplx arg_increment(cplx a, cplx b) { return std::log(b / a); }

}  // namespace

int multiphoton_order(double omega) {
    if (!(omega > 0.0)) throw DomainError("omega must be > 0");
    const double inv = 1.0 / omega;
    const double n = std::round(inv);
    if (n >= 1.0 && std::abs(inv - n) <= 1e-12 * inv)
        throw DomainError("omega = 1/" + std::to_string(static_cast<int>(n)) +
                          " is an exact multiphoton resonance; use the resonance pathway");
    return static_cast<int>(std::floor(inv)) + 1;
}

double branch_point_distance(const ModelConfig& cfg, cplx p) {
    const double base = cfg.binding ? -1.0 : 0.0;
    // branch points at i(base - omega m); nearest m to the imaginary part of p
    const double m = std::round((base - p.imag()) / cfg.omega);
    double best = std::numeric_limits<double>::infinity();
    for (double dm = -1; dm <= 1; ++dm) best = std::min(best, std::abs(p - I * (base - cfg.omega * (m + dm))));
    return best;
}

int count_zeros(const ModelConfig& cfg, cplx lo, cplx hi, int n, const BranchSpec& spec) {
    const cplx c[4] = {lo, cplx(hi.real(), lo.imag()), hi, cplx(lo.real(), hi.imag())};
    double total = 0.0;
    cplx prev = eval_converged(cfg, c[0], spec).f;
    for (int side = 0; side < 4; ++side) {
        const cplx a = c[side], b = c[(side + 1) % 4];
        for (int k = 1; k <= n; ++k) {
            const cplx z = a + (b - a) * (static_cast<double>(k) / n);
            const cplx f = eval_converged(cfg, z, spec).f;
            total += arg_increment(prev, f).imag();
            prev = f;
        }
    }
    return static_cast<int>(std::lround(total / (2 * PI)));
}

PoleResult find_pole(const ModelConfig& cfg, cplx guess, const PoleOptions& opt) {
    cfg.validate();
    PoleResult res;
    res.order_N = multiphoton_order(cfg.omega);
    if (cfg.r == 0.0) {
        res.converged = true;
        return res;
    }
    const double r2 = cfg.r * cfg.r;
    cplx x0 = guess;
    if (x0 == cplx(0.0, 0.0)) x0 = 1e-3 * r2 * cplx(-1.0, 1.0);
    const Evaluated e0 = eval_converged(cfg, x0, opt.spec);
    cplx x1 = x0 - e0.f;  // the pole function has unit slope far from the O(r^2) zero
    if (std::abs(x1 - x0) < 1e-300) x1 = x0 * 1.01;
    SecantOut out = secant(cfg, x0, x1, opt, 1e-6 * r2);

    if (!out.ok) {
        // winding-number localisation in the rectangle [-r^2, 0] x [-r^2, r^2]
        // the right edge is nudged off Re p = 0 so no corner sits on the source pole p = 0
        cplx lo(-r2, -r2), hi(1e-3 * r2, r2);
        int nz = count_zeros(cfg, lo, hi, 200, opt.spec);
        if (nz < 1)
            throw ConvergenceError("secant failed and the search rectangle encloses no zero", std::abs(out.fx));
        for (int depth = 0; depth < 12; ++depth) {
            const cplx mid = 0.5 * (lo + hi);
            const cplx q[4][2] = {{lo, mid},
                                  {cplx(mid.real(), lo.imag()), cplx(hi.real(), mid.imag())},
                                  {cplx(lo.real(), mid.imag()), cplx(mid.real(), hi.imag())},
                                  {mid, hi}};
            bool found = false;
            for (auto& box : q) {
                if (count_zeros(cfg, box[0], box[1], 60, opt.spec) >= 1) {
                    lo = box[0];
                    hi = box[1];
                    found = true;
                    break;
                }
            }
            if (!found) break;
        }
        const cplx c = 0.5 * (lo + hi);
        out = secant(cfg, c, c + 0.1 * (hi - lo), opt, 1e-6 * r2);
        res.diagnostic = "secant fallback via argument principle";
    }
    res.xi0 = out.x;
    res.gamma = -2.0 * out.x.real();
    res.stark_shift = out.x.imag();
    res.converged = out.ok;
    res.truncation_used = out.window;
    res.residual = std::abs(out.fx);
    res.branch_distance = branch_point_distance(cfg, out.x);
    // the small-r expansion needs Gamma << distance to the threshold
    res.near_branch_point = res.branch_distance < 4.0 * std::max(res.gamma, 0.0) || res.branch_distance == 0.0;
    if (!out.ok) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "pole iteration diverged; last iterate %.6e%+.6ei, |f| = %.3e",
                      out.x.real(), out.x.imag(), std::abs(out.fx));
        throw ConvergenceError(buf, std::abs(out.fx));
    }
    if (res.near_branch_point) res.diagnostic += (res.diagnostic.empty() ? "" : "; ") + std::string("pole within 4 Gamma of a branch point");
    return res;
}

}  // namespace dd
