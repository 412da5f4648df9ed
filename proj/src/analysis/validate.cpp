#include "ddecay/analysis/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "ddecay/errors.hpp"
#include "ddecay/floquet/inversion.hpp"
#include "ddecay/floquet/recurrence.hpp"
#include "ddecay/oracle/crank_nicolson.hpp"
#include "ddecay/timedomain/volterra.hpp"

namespace dd {

namespace {

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::vector<double> grid(double t_max, double dt) {
    std::vector<double> t;
    for (int i = 0; i * dt <= t_max + 1e-12; ++i) t.push_back(i * dt);
    return t;
}

// theta on the coarse grid t from a Volterra state with step h (t must be multiples of h)
std::vector<cplx> sample(const SurvivalTrace& tr, const std::vector<double>& t, double h) {
    std::vector<cplx> out;
    for (double ti : t) {
        const auto k = static_cast<std::size_t>(std::llround(ti / h));
        out.push_back(tr.theta.at(k));
    }
    return out;
}

struct Worst {
    double value = 0.0;
    std::string where;
    void update(double v, const std::string& w) {
        if (v > value || !std::isfinite(v)) value = v, where = w;
    }
};

}  // namespace

CheckResult check_branch_continuity(Cut cut, bool free, double rho, bool corrupt_below) {
    const cplx b = free ? cplx(0.0) : cplx(0.0, -1.0);
    const BranchSpec spec{cut, Side::principal, 0.0};
    auto f = [&](cplx p) { return free ? sqrt_minus_ip(p, spec) : sqrt_one_minus_ip(p, spec); };
    auto w_of = [&](cplx p) { return free ? -I * p : 1.0 - I * p; };
    const double eps = 1e-12;
    // horizontal cut to the left of b, vertical cut below it; walk from the "above" side to "below"
    const double phi0 = cut == Cut::horizontal_left ? PI - eps : -PI / 2 + eps;
    const double phi1 = cut == Cut::horizontal_left ? -PI + eps : 3 * PI / 2 - eps;
    const cplx on_cut = cut == Cut::horizontal_left ? b - rho : b - I * rho;

    const int steps = 20000;
    cplx tracked = f(b + rho * std::exp(I * phi0));
    double worst_path = 0.0;
    for (int k = 1; k <= steps; ++k) {
        const cplx p = b + rho * std::exp(I * (phi0 + (phi1 - phi0) * k / steps));
        const cplx s = std::sqrt(w_of(p));
        tracked = std::abs(s - tracked) < std::abs(s + tracked) ? s : -s;
        worst_path = std::max(worst_path, std::abs(f(p) - tracked));
    }
    const BranchSpec above{cut, Side::above, 0.0}, below{cut, Side::below, 0.0};
    auto side_value = [&](const BranchSpec& s) { return free ? sqrt_minus_ip(on_cut, s) : sqrt_one_minus_ip(on_cut, s); };
    cplx ref_below = side_value(below);
    if (corrupt_below) ref_below = -ref_below;
    const double start_err = std::abs(f(b + rho * std::exp(I * phi0)) - side_value(above));
    const double end_err = std::abs(tracked - ref_below);

    CheckResult c;
    c.name = std::string("branch continuity (") + (free ? "free" : "bound") + ", " +
             (cut == Cut::horizontal_left ? "horizontal" : "vertical") + ")";
    c.value = std::max({worst_path, start_err, end_err});
    c.tolerance = 1e-10;
    c.pass = c.value < c.tolerance;
    c.detail = fmt("path %.2e, above-limit %.2e, below-limit %.2e", worst_path, start_err, end_err);
    return c;
}

CheckResult check_kernel_identity(int points, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-0.5, 1.5), im(-3.0, 3.0), aa(0.1, 3.0);
    CheckResult c;
    c.name = "kernel identity k+ sqrt(1-ip) - k- = 1";
    c.tolerance = 1e-12;
    Worst w;
    int done = 0;
    while (done < points) {
        const cplx p(re(rng), im(rng));
        const double a = aa(rng);
        if (std::abs(p) < 0.05 || std::abs(p + I) < 0.05 || (p.real() < 0.05 && std::abs(p.imag() + 1.0) < 0.05))
            continue;
        for (Cut cut : {Cut::horizontal_left, Cut::vertical_principal}) {
            const BranchSpec s{cut, Side::principal, 0.0};
            if (cut == Cut::vertical_principal && std::abs(p.real()) < 0.05 && p.imag() < -1.0) continue;
            const cplx kp = kernel_k_plus(p, a, s), km = kernel_k_minus(p, a, s);
            const double err = std::abs(kp * sqrt_one_minus_ip(p, s) - km - 1.0) / std::max(1.0, std::abs(km));
            w.update(err, fmt("p = %.4f%+.4fi, a = %.3f", p.real(), p.imag(), a));
        }
        ++done;
    }
    c.value = w.value;
    c.pass = c.value < c.tolerance;
    c.detail = "worst at " + w.where;
    return c;
}

std::vector<CheckResult> run_property_suite(const ValidateOptions& opt) {
    std::vector<CheckResult> out;
    double worst_abs = 0.0;
    std::string worst_abs_where = "none";
    auto track = [&](const SurvivalTrace& tr, const std::string& label) {
        for (std::size_t i = 0; i < tr.theta.size(); ++i)
            if (std::abs(tr.theta[i]) > worst_abs) worst_abs = std::abs(tr.theta[i]), worst_abs_where = label;
    };
    auto guarded = [&](const std::string& name, auto&& fn) {
        try {
            out.push_back(fn());
        } catch (const std::exception& e) {
            out.push_back({name, false, NAN, 0.0, std::string("threw: ") + e.what()});
        }
    };

    guarded("branch continuity", [&] { return check_branch_continuity(Cut::horizontal_left, false, 0.5, opt.corrupt_branch); });
    guarded("branch continuity", [&] { return check_branch_continuity(Cut::vertical_principal, false, 0.5, opt.corrupt_branch); });
    guarded("branch continuity", [&] { return check_branch_continuity(Cut::horizontal_left, true, 0.5, opt.corrupt_branch); });
    guarded("kernel identity", [&] { return check_kernel_identity(); });

    const std::vector<double> tg = grid(30.0, 0.5);
    InversionOptions io;
    io.tol = opt.tol;

    guarded("r = 0 laplace", [&] {
        CheckResult c{"r = 0: theta == 1 (laplace, exact)", true, 0.0, 0.0, ""};
        for (auto cfg : {ModelConfig::u1(0.59, 0.0, 1.2), ModelConfig::u2(1.0, 0.0, 0.7)}) {
            const auto tr = invert_survival(cfg, tg, io);
            track(tr, "laplace r = 0");
            for (const cplx th : tr.theta) c.value = std::max(c.value, std::abs(th - 1.0));
        }
        c.pass = c.value == 0.0;
        return c;
    });
    guarded("r = 0 volterra", [&] {
        CheckResult c{"r = 0: theta == 1 (volterra)", true, 0.0, 1e-10, ""};
        const auto tr = survival_from_Y(solve_volterra(ModelConfig::u2(1.0, 0.0, 0.7), 30.0, opt.volterra_h));
        track(tr, "volterra r = 0");
        for (const cplx th : tr.theta) c.value = std::max(c.value, std::abs(th - 1.0));
        c.pass = c.value < c.tolerance;
        return c;
    });
    guarded("U2 parity", [&] {
        CheckResult c{"U2 parity r -> -r (laplace, volterra)", true, 0.0, 10.0 * opt.tol, ""};
        const auto cp = ModelConfig::u2(1.0, 0.5, 1.3), cm = ModelConfig::u2(1.0, -0.5, 1.3);
        const auto lp = invert_survival(cp, tg, io), lm = invert_survival(cm, tg, io);
        track(lp, "laplace U2");
        track(lm, "laplace U2 (-r)");
        double dl = 0.0;
        for (std::size_t i = 0; i < tg.size(); ++i) dl = std::max(dl, std::abs(std::norm(lp.theta[i]) - std::norm(lm.theta[i])));
        const auto vp = survival_from_Y(solve_volterra(cp, 30.0, opt.volterra_h));
        const auto vm = survival_from_Y(solve_volterra(cm, 30.0, opt.volterra_h));
        double dv = 0.0;
        for (std::size_t i = 0; i < vp.theta.size(); ++i) dv = std::max(dv, std::abs(std::norm(vp.theta[i]) - std::norm(vm.theta[i])));
        c.value = dl;
        c.pass = dl < c.tolerance && dv < 1e-10;
        c.detail = fmt("laplace %.2e, volterra %.2e", dl, dv);
        return c;
    });
    guarded("truncation doubling", [&] {
        CheckResult c{"truncation doubling of the continued fraction", true, 0.0, 1e-10, ""};
        const cplx p0(0.05, 0.3);
        for (auto cfg : {ModelConfig::u1(0.59, 1.0, 1.25), ModelConfig::u2(1.0, 0.5, 0.7)}) {
            const auto s1 = solve_inhomogeneous(build_system(cfg, p0, {-16, 16}));
            const auto s2 = solve_inhomogeneous(build_system(cfg, p0, {-32, 32}));
            const auto h1 = h_harmonics(cfg, p0, s1, 4), h2 = h_harmonics(cfg, p0, s2, 4);
            double scale = 0.0, diff = 0.0;
            for (std::size_t i = 0; i < h1.size(); ++i) {
                scale = std::max(scale, std::abs(h2[i]));
                diff = std::max(diff, std::abs(h1[i] - h2[i]));
            }
            c.value = std::max(c.value, diff / std::max(scale, 1e-300));
        }
        c.pass = c.value < c.tolerance;
        return c;
    });
    guarded("laplace vs volterra", [&] {
        CheckResult c{"laplace vs volterra |theta|^2", true, 0.0, opt.agreement, ""};
        Worst w;
        for (auto cfg : {ModelConfig::u1(0.59, 1.0, 1.25), ModelConfig::u2(0.8, 0.6, 0.9), ModelConfig::u1(1.5, 0.3, 1.8)}) {
            const auto lp = invert_survival(cfg, tg, io);
            track(lp, "laplace");
            const auto vt = survival_from_Y(solve_volterra(cfg, 30.0, opt.volterra_h));
            track(vt, "volterra");
            const auto vs = sample(vt, tg, opt.volterra_h);
            for (std::size_t i = 0; i < tg.size(); ++i) {
                const double L = std::norm(lp.theta[i]);
                if (L <= 1e-6) continue;
                w.update(std::abs(std::norm(vs[i]) - L) / L,
                         std::string(to_string(cfg.potential)) + fmt(" a=%.2f r=%.2f omega=%.2f", cfg.a, cfg.r, cfg.omega) +
                             fmt(" t=%.1f", tg[i]));
            }
        }
        c.value = w.value;
        c.pass = c.value < c.tolerance;
        c.detail = "worst at " + w.where;
        return c;
    });
    if (opt.include_oracle) {
        guarded("oracle", [&] {
            CheckResult c{"oracle unitarity per unit time", true, 0.0, 1e-6, ""};
            const auto cfg = ModelConfig::u1(0.59, 1.0, 1.25);
            const double T = 20.0;
            const auto run = evolve_pde(cfg, Initial{}, default_grid(cfg, T, opt.oracle_dx, opt.oracle_dx / 5), T);
            track(run.trace, "oracle");
            c.value = run.worst_drift_rate;
            c.pass = c.value < c.tolerance;
            return c;
        });
        guarded("oracle convergence", [&] {
            CheckResult c{"oracle convergence to volterra (order)", true, 0.0, 0.5, ""};
            const auto cfg = ModelConfig::u1(0.59, 1.0, 1.25);
            const double T = 20.0;
            const auto vt = survival_from_Y(solve_volterra(cfg, T, 0.005));
            const double ref = std::norm(vt.theta.back());
            double e[2];
            for (int k = 0; k < 2; ++k) {
                const double dx = opt.oracle_dx / (1 << k);
                const auto run = evolve_pde(cfg, Initial{}, default_grid(cfg, T, dx, dx / 5), T);
                e[k] = std::abs(std::norm(run.trace.theta.back()) - ref) / ref;
            }
            const double order = std::log2(e[0] / e[1]);
            c.value = std::abs(order - 2.0);
            c.pass = c.value < c.tolerance && e[1] < 1e-2;
            c.detail = fmt("rel. errors %.2e, %.2e; order %.2f", e[0], e[1], order);
            return c;
        });
        guarded("discrete bound energy", [&] {
            CheckResult c{"discrete bound-state energy -1 + O(dx^2)", true, 0.0, 0.05, ""};
            GridSpec g;
            g.X = 30.0;
            double coef[2];
            for (int k = 0; k < 2; ++k) {
                g.dx = 0.05 / (1 << k);
                coef[k] = (discrete_bound_state(g).energy + 1.0) / (g.dx * g.dx);
            }
            // both should sit near the leading coefficient 1/4
            c.value = std::max(std::abs(coef[0] - 0.25), std::abs(coef[1] - 0.25)) / 0.25;
            c.pass = c.value < c.tolerance;
            c.detail = fmt("(E + 1)/dx^2 = %.5f, %.5f", coef[0], coef[1]);
            return c;
        });
    }
    CheckResult bound{"|theta| <= 1 + 1e-6 on every trace", worst_abs <= 1.0 + 1e-6, worst_abs - 1.0, 1e-6,
                      "largest |theta| from " + worst_abs_where};
    out.push_back(bound);
    return out;
}

}  // namespace dd
