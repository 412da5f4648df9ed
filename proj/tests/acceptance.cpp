// Acceptance report: one PASS/FAIL line per criterion, on stdout and in acceptance_report.txt.
// Usage: ddecay_acceptance [criterion ...]
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ddecay/analysis/fit.hpp"
#include "ddecay/analysis/validate.hpp"
#include "ddecay/floquet/asymptotic.hpp"
#include "ddecay/floquet/inversion.hpp"
#include "ddecay/floquet/poles.hpp"
#include "ddecay/floquet/stabilization.hpp"
#include "ddecay/freeparticle/freeparticle.hpp"
#include "ddecay/oracle/crank_nicolson.hpp"
#include "ddecay/timedomain/volterra.hpp"

using namespace dd;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... v) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, v...);
    return buf;
}

std::vector<double> logspace(double lo, double hi, int per_decade) {
    std::vector<double> t;
    const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
    for (int k = 0; k <= n; ++k) t.push_back(lo * std::pow(10.0, static_cast<double>(k) / per_decade));
    return t;
}

// largest step <= hmax that divides t_max
double step_for(double t_max, double hmax) { return t_max / std::ceil(t_max / hmax); }

SurvivalTrace volterra_trace(const ModelConfig& cfg, double t_max, double hmax) {
    const double h = step_for(t_max, std::min(hmax, 2.0 * PI / (40.0 * cfg.omega)));
    return survival_from_Y(solve_volterra(cfg, t_max, h));
}

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

Outcome ordering_r1() {
    const std::vector<double> om{0.8, 1.12, 1.2, 1.25};
    std::vector<double> last;
    std::vector<bool> verdict;
    std::string d;
    for (double w : om) {
        const auto cfg = ModelConfig::u1(0.59, 1.0, w);
        const double h = 0.025;
        const auto tr = survival_from_Y(solve_volterra(cfg, 500.0, h));
        const auto y = tr.abs2();
        const auto f = exponential_window(tr.t, y, w);
        last.push_back(y.back());
        verdict.push_back(f.verdict);
        d += fmt("w=%.2f |th(500)|^2=%.3e window=%s; ", w, y.back(), f.verdict ? "yes" : "no");
    }
    const bool slowest = last[1] > last[0] && last[1] > last[2] && last[1] > last[3];
    return {slowest && verdict[0] && verdict[3] && !verdict[2], d};
}

Outcome stabilizing_frequency() {
    const auto s = stabilizing_frequencies(Potential::U1, 0.59, 1.0, 1, 1.0, 1.5);
    if (s.empty()) return {false, "no omega_s found in (1, 1.5)"};
    const double w = s.front().omega;
    return {std::abs(w - 1.089) <= 0.010, fmt("omega_s=%.6f (1.089 +- 0.010), g0=%.6f", w, s.front().g0)};
}

Outcome power_tail() {
    const auto cfg = ModelConfig::u1(0.59, 0.1, 1.5);
    const auto t = logspace(1e3, 1e7, 10);
    const auto tr = invert_survival(cfg, t);
    const auto f = fit_power_law(tr.t, tr.abs2(), 1e6, 1e7);
    return {std::abs(f.slope + 3.0) <= 0.15,
            fmt("slope over [1e6, 1e7] = %.4f (-3 +- 0.15), rms %.3f", f.slope, f.residual)};
}

Outcome golden_rule() {
    std::vector<double> r{0.01, 0.02, 0.03, 0.05, 0.07, 0.1}, g;
    for (double x : r) g.push_back(find_pole(ModelConfig::u1(0.59, x, 1.5)).gamma);
    const auto f = fit_gamma_vs_r(r, g);
    // time-domain cross-check at r = 0.1: Gamma = 8.8e-4, three e-folds by t = 3500
    const auto cfg = ModelConfig::u1(0.59, 0.1, 1.5);
    const auto tr = volterra_trace(cfg, 3500.0, 0.05);
    const auto w = exponential_window(tr.t, tr.abs2(), 1.5);
    const double e = rel(-w.slope, g.back());
    return {std::abs(f.slope - 2.0) <= 0.1 && w.verdict && e <= 0.1,
            fmt("exponent %.4f (2 +- 0.1); r=0.1: pole Gamma %.4e, volterra window [%.0f, %.0f] Gamma %.4e, rel %.2e (0.1)",
                f.slope, g.back(), w.lo, w.hi, -w.slope, e)};
}

Outcome multiphoton() {
    std::vector<double> r{0.05, 0.075, 0.1, 0.15, 0.2, 0.3}, g;
    int N = 0;
    for (double x : r) {
        const auto p = find_pole(ModelConfig::u1(0.59, x, 0.55));
        g.push_back(p.gamma);
        N = p.order_N;
    }
    const auto f = fit_gamma_vs_r(r, g);
    return {std::abs(f.slope - 4.0) <= 0.3, fmt("N=%d exponent %.4f (4 +- 0.3)", N, f.slope)};
}

Outcome resonance() {
    const double r = 0.05;
    const auto tu = tune_resonance(Potential::U1, 0.59, r);
    const auto cfg = ModelConfig::u1(0.59, r, tu.omega);
    const auto t = logspace(1.0, 1e10, 8);
    const auto tr = invert_survival(cfg, t);
    const auto y = tr.abs2();
    const auto w = exponential_window(tr.t, y, tu.omega);
    // the resonance integral with h fitted to the trace, slope at large t r^4 lambda1^2/4
    const auto ls = lambda_sigma_at_one(Potential::U1, 0.59, r);
    const auto hf = fit_h_param(tr, ls.lambda);
    const double scale = std::pow(r, 4) * ls.lambda * ls.lambda / 4.0;
    const auto tf = logspace(1e3 / scale, 1e4 / scale, 10);
    const auto form = theta_resonance_trace(cfg, tf, hf.h, ls.lambda);
    const auto fs = fit_power_law(form.t, form.abs2(), tf.front(), tf.back());
    std::string local;
    for (double lo : {1e6, 1e7, 1e8, 1e9}) local += fmt(" %.3f", fit_power_law(tr.t, y, lo, 10.0 * lo).slope);
    return {!w.verdict && std::abs(fs.slope + 3.0) <= 0.15,
            fmt("omega=%.10f Gamma=%.2e; best window smoothed rms %.3g (needs < 0.005), verdict %s; "
                "formula h=%.3f (rms %.3f) slope %.4f (-3 +- 0.15); laplace slopes per decade from 1e6:%s",
                tu.omega, tu.pole.gamma, w.smooth_residual, w.verdict ? "true" : "false", hf.h, hf.rms, fs.slope,
                local.c_str())};
}

Outcome cross_pipeline() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ur(0.05, 1.0), uw(0.5, 2.0), ua(0.2, 2.0), ut(20.0, 50.0);
    std::bernoulli_distribution two(0.5);
    double worst_lv = 0.0, worst_o = 0.0;
    std::string d;
    for (int k = 0; k < 10; ++k) {
        const double a = ua(rng), r = ur(rng), w = uw(rng), tmax = std::round(ut(rng));
        const auto cfg = two(rng) ? ModelConfig::u2(a, r, w) : ModelConfig::u1(a, r, w);
        const auto v = volterra_trace(cfg, tmax, 0.01);
        OracleOptions oo;
        oo.sample_dt = 0.5;
        const auto o = evolve_pde(cfg, Initial{}, default_grid(cfg, tmax, 0.025, 0.005), tmax, oo);
        const auto l = invert_survival(cfg, o.trace.t);
        const double hv = v.t[1] - v.t[0];
        double lv = 0.0, ov = 0.0;
        for (std::size_t i = 0; i < l.t.size(); ++i) {
            const double yl = std::norm(l.theta[i]);
            if (yl <= 1e-6) continue;
            const auto j = static_cast<std::size_t>(std::llround(l.t[i] / hv));
            const double yv = std::norm(v.theta[j]), yo = std::norm(o.trace.theta[i]);
            lv = std::max(lv, rel(yv, yl));
            ov = std::max({ov, rel(yo, yl), rel(yo, yv)});
        }
        worst_lv = std::max(worst_lv, lv);
        worst_o = std::max(worst_o, ov);
        d += fmt("[%s a=%.2f r=%.2f w=%.2f t=%.0f: %.1e %.1e] ", to_string(cfg.potential), a, r, w, tmax, lv, ov);
    }
    return {worst_lv <= 1e-3 && worst_o <= 1e-2,
            fmt("laplace/volterra %.2e (1e-3), oracle %.2e (1e-2); ", worst_lv, worst_o) + d};
}

Outcome trapping() {
    const double a = 4.0, w = 1.5, tmax = 1000.0;
    const auto packet = make_gaussian(0.0, 1.0, 0.0);
    // (i) undriven: closed form and the trap pipeline with r = 0
    const auto tc = logspace(100.0, 1000.0, 20);
    std::vector<double> pc;
    const double L = 2.0 * a + 5.0;
    for (double t : tc) pc.push_back(free_localization(packet, L, t));
    const auto fc = fit_power_law(tc, pc, 100.0, 1000.0);
    TrapOptions to;
    to.h = 0.05;
    const auto und = trapped_evolution(ModelConfig::free_trap(a, 0.0, w), packet, 400.0, to);
    const auto fu = fit_power_law(und.t, und.probability, 100.0, 400.0);
    // (ii) on and off the manifold
    const auto sp = stabilization_search(a, w, 1, StabMode::free);
    if (!sp) return {false, "no free-mode stabilization point at a=4, omega=1.5"};
    to.g0 = sp->g0;
    const auto on = trapped_evolution(ModelConfig::free_trap(a, sp->r_s, w), packet, tmax, to);
    const auto off = trapped_evolution(ModelConfig::free_trap(a, 0.8 * sp->r_s, w), packet, tmax, to);
    const double ratio = on.probability.back() / off.probability.back();
    const double q = quasiperiodicity(on.t, on.probability, w, 0.5 * tmax);
    const double qo = quasiperiodicity(off.t, off.probability, w, 0.5 * tmax);
    const bool ok = std::abs(fc.slope + 1.0) <= 0.1 && std::abs(fu.slope + 1.0) <= 0.1 && ratio >= 10.0 && q > 0.99;
    return {ok, fmt("undriven slope %.4f closed form, %.4f trap pipeline (-1 +- 0.1); r_s=%.6f: P(1e3)=%.3e vs "
                    "%.3e at 0.8 r_s, ratio %.3g (>= 10); quasiperiodicity %.5f (> 0.99), off-manifold %.5f",
                    fc.slope, fu.slope, sp->r_s, on.probability.back(), off.probability.back(), ratio, q, qo)};
}

Outcome property_suite() {
    const auto res = run_property_suite();
    bool ok = true;
    std::string d;
    for (const auto& c : res) {
        ok = ok && c.pass;
        if (!c.pass) d += c.name + " (" + fmt("%.3g > %.3g", c.value, c.tolerance) + ") ";
    }
    return {ok, fmt("%zu checks", res.size()) + (ok ? std::string(", all pass") : ", failing: " + d)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"ordering and windows at r = 1", ordering_r1},
        {"stabilizing frequency", stabilizing_frequency},
        {"power-law tail", power_tail},
        {"golden-rule scaling", golden_rule},
        {"multiphoton scaling", multiphoton},
        {"resonance regime", resonance},
        {"cross-pipeline agreement", cross_pipeline},
        {"free particle and trapping", trapping},
        {"property suite", property_suite},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    std::ofstream report("acceptance_report.txt");
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string line = fmt("criterion %d %s: %s [%.0fs] ", id, o.pass ? "PASS" : "FAIL", criteria[k].first, s) +
                                 o.detail;
        std::printf("%s\n", line.c_str());
        std::fflush(stdout);
        report << line << '\n' << std::flush;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
