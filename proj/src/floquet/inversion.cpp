#include "ddecay/floquet/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ddecay/errors.hpp"
#include "ddecay/floquet/recurrence.hpp"
#include "ddecay/parallel.hpp"
#include "ddecay/quadrature.hpp"

namespace dd {

namespace {

constexpr double kBornShift = 1.0;

double born_constant(const ModelConfig& cfg) {
    const Wells w = wells_of(cfg);
    double c = 0.0;
    for (int j = 0; j < w.count; ++j) c += w.c[j] * w.u[j] * w.u[j];
    return c;
}

// H - H_Born(. + 1) at every harmonic |n| <= K
std::vector<cplx> reduced_harmonics(const ModelConfig& cfg, cplx p0, int K, double C) {
    if (cfg.r == 0.0) return std::vector<cplx>(static_cast<std::size_t>(2 * K + 1), 0.0);
    const FloquetSolution sol = solve_converged(cfg, p0, K, 1e-13);
    std::vector<cplx> h = h_harmonics(cfg, p0, sol, K);
    for (int n = -K; n <= K; ++n) {
        const cplx q = p0 + I * (cfg.omega * n) + kBornShift;
        h[static_cast<std::size_t>(n + K)] -= cfg.r / q * C * (2.0 * I * cfg.omega) / (q * q + cfg.omega * cfg.omega);
    }
    return h;
}

double wrap(double v, double omega) {
    double m = std::fmod(v, omega);
    if (m < 0.0) m += omega;
    return m;
}

int choose_harmonics(const ModelConfig& cfg, double c, double C, double target, int kmax) {
    if (cfg.r == 0.0) return 1;
    int K = 64;
    while (true) {
        int need = 1;
        bool ok = true;
        for (double frac : {0.13, 0.41, 0.77}) {
            const auto h = reduced_harmonics(cfg, cplx(c, frac * cfg.omega), K, C);
            // smallest k whose outer neighbours bound the remaining tail (decay at least like n^-3)
            int k = K;
            for (; k >= 1; --k) {
                const double edge = std::max(std::abs(h[static_cast<std::size_t>(K + k)]),
                                             std::abs(h[static_cast<std::size_t>(K - k)]));
                if (edge * k > target) break;
            }
            if (k >= K - 1) ok = false;
            need = std::max(need, k + 1);
        }
        if (ok || K >= kmax) return std::min(std::max(need, 8), kmax);
        K *= 2;
    }
}

SurvivalTrace direct_inversion(const ModelConfig& cfg, const std::vector<double>& t, const InversionOptions& opt) {
    SurvivalTrace tr;
    tr.t = t;
    tr.config = cfg;
    tr.pipeline = Pipeline::laplace;
    tr.theta.assign(t.size(), 1.0);
    if (t.empty() || cfg.r == 0.0) return tr;
    const double T = std::max(1.0, *std::max_element(t.begin(), t.end()));
    const double c = 1.0 / T;
    const double C = born_constant(cfg);
    const double om = cfg.omega;
    const double amp = std::exp(c * T) / (2.0 * PI);
    const int K = choose_harmonics(cfg, c, C, 0.05 * opt.tol / (amp * om), opt.max_harmonics);

    std::vector<double> breaks = {0.0, om};
    std::vector<double> sing = {wrap(-1.0, om)};
    try {
        const PoleResult pr = find_pole(cfg);
        sing.push_back(wrap(pr.xi0.imag(), om));
    } catch (const Error&) {
    }
    for (double s : sing) {
        for (double d : {-10.0 * c, -2.0 * c, 0.0, 2.0 * c, 10.0 * c}) {
            const double v = s + d;
            if (v > 0.0 && v < om) breaks.push_back(v);
        }
    }
    breaks.push_back(std::min(om, 10.0 * c));
    breaks.push_back(std::max(0.0, om - 10.0 * c));

    QuadOptions qo;
    qo.abs_tol = 0.2 * opt.tol / amp;
    qo.max_width = std::min(om, 2.0 / T);
    qo.max_panels = 20000;
    const std::size_t dim = static_cast<std::size_t>(2 * K + 1);
    auto f = [&](double y0, std::vector<cplx>& out) { out = reduced_harmonics(cfg, cplx(c, y0), K, C); };
    VecQuadResult q = integrate_vec(f, dim, breaks, qo, true);
    if (!q.converged) {
        throw ConvergenceError("Bromwich quadrature did not reach tolerance (worst t = " + std::to_string(T) + ")",
                               q.error * amp);
    }
    SynthesisInput in{q.nodes, q.weights, q.samples, om};
    const std::vector<cplx> s = opt.parallel ? synthesize_parallel(in, t) : synthesize_serial(in, t);
    for (std::size_t j = 0; j < t.size(); ++j) {
        const double tj = t[j];
        const cplx born = std::exp(-kBornShift * tj) * 2.0 * I * cfg.r * C * (1.0 - std::cos(om * tj)) / om;
        tr.theta[j] = 1.0 - born - std::exp(c * tj) / (2.0 * PI) * s[j];
    }
    return tr;
}

double base_branch(const ModelConfig& cfg) { return cfg.binding ? -1.0 : 0.0; }

// distance from p to the nearest cut ray b_m + s e^{i(pi + tilt)}
double cut_distance(const ModelConfig& cfg, cplx p, double tilt) {
    const cplx dir = std::polar(1.0, PI + tilt);
    double best = std::numeric_limits<double>::infinity();
    const double m0 = std::round((base_branch(cfg) - p.imag()) / cfg.omega);
    for (double dm = -2; dm <= 2; ++dm) {
        const cplx b = I * (base_branch(cfg) - cfg.omega * (m0 + dm));
        const cplx d = p - b;
        const double along = (d * std::conj(dir)).real();
        best = std::min(best, along <= 0.0 ? std::abs(d) : std::abs((d * std::conj(dir)).imag()));
    }
    return best;
}

constexpr int kCutHarmonics = 40;

}  // namespace

ResidueSeries pole_residues(const ModelConfig& cfg, const PoleResult& pole, double tilt, int samples) {
    ResidueSeries rs;
    rs.xi0 = pole.xi0;
    rs.N = kCutHarmonics;
    rs.R.assign(static_cast<std::size_t>(2 * rs.N + 1), 0.0);
    if (cfg.r == 0.0) return rs;
    const double rad = 0.5 * std::min(std::abs(pole.xi0), cut_distance(cfg, pole.xi0, tilt));
    BranchSpec spec;
    spec.tilt = tilt;
    for (int k = 0; k < samples; ++k) {
        const cplx e = std::polar(rad, 2.0 * PI * (k + 0.5) / samples);
        const cplx p = pole.xi0 + e;
        const FloquetSolution sol = solve_converged(cfg, p, rs.N, 1e-13, spec);
        const std::vector<cplx> h = h_harmonics(cfg, p, sol, rs.N);
        for (std::size_t n = 0; n < h.size(); ++n) rs.R[n] -= h[n] * e / static_cast<double>(samples);
    }
    return rs;
}

cplx cut_integral(const ModelConfig& cfg, double t, double tilt, double tol, double hole) {
    if (cfg.r == 0.0) return 0.0;
    const double phi = PI + tilt;
    const cplx dir = std::polar(1.0, phi);
    const cplx b = I * base_branch(cfg);
    BranchSpec spec;
    spec.tilt = tilt;
    const int K = kCutHarmonics;
    const cplx z = std::polar(1.0, cfg.omega * t);
    const cplx zK = std::pow(std::conj(z), K);
    auto fold = [&](const std::vector<cplx>& h) {
        cplx acc = 0.0;
        for (int n = K; n >= -K; --n) acc = acc * z + h[static_cast<std::size_t>(n + K)];
        return acc * zK;
    };
    auto jump = [&](double x) {
        const cplx p0 = b + x * dir;
        const FloquetSolution sa = solve_converged(cfg, p0, K, 1e-13, spec, CutEval{0, x, Side::above});
        const FloquetSolution sb = solve_converged(cfg, p0, K, 1e-13, spec, CutEval{0, x, Side::below});
        const auto ha = h_harmonics(cfg, p0, sa, K);
        const auto hb = h_harmonics(cfg, p0, sb, K);
        std::vector<cplx> d(ha.size());
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = ha[i] - hb[i];
        return -fold(d);  // Theta jump; the 1/p part has none
    };
    const double xmax = hole + 46.0 / (t * std::cos(tilt));
    // e^{bt} is kept apart so the large phase is not rounded together with the small offset
    const cplx ebt = std::exp(b * t);
    auto f = [&](double u) {
        const double x = hole + u * u;
        return std::exp(x * dir * t) * jump(x) * (2.0 * u);
    };
    QuadOptions qo;
    qo.abs_tol = tol;
    qo.rel_tol = 1e-12;
    qo.max_panels = 4000;
    const QuadResult q = integrate(f, 0.0, std::sqrt(xmax - hole), qo);
    if (!q.converged) throw ConvergenceError("cut integral did not converge at t = " + std::to_string(t), q.error);
    cplx total = ebt * dir / (2.0 * PI * I) * q.value;
    if (hole > 0.0) {
        // circle |p - b| = hole, counterclockwise from the lower to the upper side of the cut; it
        // encloses the pole, so no separate residue is added
        auto g = [&](double alpha) {
            const cplx e = std::polar(hole, alpha);
            const cplx p0 = b + e;
            const FloquetSolution s = solve_converged(cfg, p0, K, 1e-13, spec, CutEval{0, 0.0, Side::principal, e});
            return -std::exp(e * t) * fold(h_harmonics(cfg, p0, s, K)) * (I * e);
        };
        // the circle integrand is O(1) while the result may be tiny; the Floquet solves close to the
        // pole carry noise near 1e-10 of the scale, so the target sits above that floor
        double scale = 0.0;
        for (int k = 0; k < 8; ++k) scale = std::max(scale, std::abs(g(phi - 2.0 * PI * (k + 0.5) / 8)));
        QuadOptions qc_opt = qo;
        qc_opt.abs_tol = std::max(tol, 1e-10 * scale);
        const QuadResult qc = integrate(g, phi - 2.0 * PI, phi, qc_opt);
        if (!qc.converged && qc.error > std::max(10.0 * qc_opt.abs_tol, 1e-6 * std::abs(qc.value)))
            throw ConvergenceError("keyhole circle did not converge at t = " + std::to_string(t), qc.error);
        total += ebt * qc.value / (2.0 * PI * I);
    }
    return total;
}

double keyhole_radius(const ModelConfig& cfg, const PoleResult& pole, double t) {
    // must enclose the pole, should keep e^{hole t} moderate, must stay clear of the images of p = 0
    const double d = pole.branch_distance;
    const double b = base_branch(cfg);
    const double m = std::round(-b / cfg.omega);
    const double d0 = std::abs(b + cfg.omega * m) > 0.0 ? std::abs(b + cfg.omega * m) : cfg.omega;
    return std::max(1.5 * d, std::min({3.0 / std::max(t, 1.0), 0.25 * d0, 0.05}));
}

SurvivalTrace invert_survival(const ModelConfig& cfg, const std::vector<double>& t_grid, const InversionOptions& opt) {
    cfg.validate();
    if (!cfg.binding) throw DomainError("survival amplitude needs the bound state (FreeTrap has none)");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("time grid must be ascending");
    if (!t_grid.empty() && t_grid.front() < 0.0) throw DomainError("times must be >= 0");

    std::vector<double> early, late;
    for (double t : t_grid) {
        const bool direct = opt.mode == InversionMode::direct ||
                            (opt.mode == InversionMode::automatic && t <= opt.direct_until);
        (direct ? early : late).push_back(t);
    }
    SurvivalTrace out;
    out.t = t_grid;
    out.config = cfg;
    out.pipeline = Pipeline::laplace;
    out.theta.reserve(t_grid.size());
    if (!early.empty()) {
        SurvivalTrace d = direct_inversion(cfg, early, opt);
        out.theta.insert(out.theta.end(), d.theta.begin(), d.theta.end());
    }
    if (!late.empty()) {
        if (cfg.r == 0.0) {
            out.theta.insert(out.theta.end(), late.size(), 1.0);
        } else {
            PoleOptions po;
            po.spec.tilt = opt.tilt;
            const PoleResult pole = find_pole(cfg, 0.0, po);
            // resonance: pole and branch point are not separable; a keyhole around the branch point
            // takes both. Its circle costs e^{1.5 d t} in cancellation, so late times go back to residues.
            auto keyhole = [&](double t) { return pole.near_branch_point && pole.branch_distance * t < 10.0; };
            std::optional<ResidueSeries> rs;
            for (double t : late) {
                if (keyhole(t)) {
                    out.theta.push_back(cut_integral(cfg, t, opt.tilt, 0.1 * opt.tol, keyhole_radius(cfg, pole, t)));
                } else {
                    if (!rs) rs = pole_residues(cfg, pole, opt.tilt);
                    const cplx z = std::polar(1.0, cfg.omega * t);
                    cplx acc = 0.0;
                    for (int n = rs->N; n >= -rs->N; --n) acc = acc * z + rs->R[static_cast<std::size_t>(n + rs->N)];
                    acc *= std::pow(std::conj(z), rs->N);
                    out.theta.push_back(std::exp(rs->xi0 * t) * acc + cut_integral(cfg, t, opt.tilt, 0.1 * opt.tol));
                }
            }
        }
    }
    if (!all_finite(out.theta)) throw ConvergenceError("non-finite survival amplitude", 0.0);
    return out;
}

}  // namespace dd
