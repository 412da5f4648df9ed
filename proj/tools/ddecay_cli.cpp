#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ddecay/analysis/fit.hpp"
#include "ddecay/analysis/validate.hpp"
#include "ddecay/errors.hpp"
#include "ddecay/floquet/inversion.hpp"
#include "ddecay/floquet/poles.hpp"
#include "ddecay/floquet/stabilization.hpp"
#include "ddecay/freeparticle/freeparticle.hpp"
#include "ddecay/io/csv.hpp"
#include "ddecay/io/manifest.hpp"
#include "ddecay/io/svg.hpp"
#include "ddecay/oracle/crank_nicolson.hpp"
#include "ddecay/timedomain/volterra.hpp"

namespace fs = std::filesystem;
using namespace dd;

namespace {

enum Exit { ok = 0, failure = 1, bad_manifest = 2, no_convergence = 3, validation_failed = 4 };

// values given on the command line; unset ones fall back to the manifest, then to defaults
struct Flags {
    std::string config;
    std::optional<std::string> potential, pipeline, out;
    std::optional<double> a, r, omega, tmax, dt, tol;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config, "manifest file (key = value, [section] headers)");
    app->add_option("--potential", f.potential, "u1, u2 or free")->check(CLI::IsMember({"u1", "u2", "free"}));
    app->add_option("--a", f.a, "well position");
    app->add_option("--r", f.r, "drive amplitude");
    app->add_option("--omega", f.omega, "drive frequency");
    app->add_option("--tmax", f.tmax, "final time");
    app->add_option("--dt", f.dt, "output spacing (also the Volterra step upper bound)");
    app->add_option("--pipeline", f.pipeline, "laplace, volterra, oracle or all")
        ->check(CLI::IsMember({"laplace", "volterra", "oracle", "all"}));
    app->add_option("--out", f.out, "output directory");
    app->add_option("--tol", f.tol, "Laplace inversion tolerance");
}

// manifest with flags applied on top, under section [run]
Manifest resolve(const Flags& f, const std::string& command) {
    Manifest m = f.config.empty() ? Manifest{} : load_manifest(f.config);
    auto put = [&](const char* key, const auto& v) {
        if (!v) return;
        if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, std::string>)
            m.set(std::string("run.") + key, *v);
        else
            m.set(std::string("run.") + key, format_double(*v));
    };
    put("potential", f.potential);
    put("pipeline", f.pipeline);
    put("out", f.out);
    put("a", f.a);
    put("r", f.r);
    put("omega", f.omega);
    put("tmax", f.tmax);
    put("dt", f.dt);
    put("tol", f.tol);
    m.set("run.command", command);
    return m;
}

ModelConfig config_of(const Manifest& m) {
    const std::string pot = m.get("run.potential", "u1");
    const double a = m.get_double("run.a", 0.59), r = m.get_double("run.r", 1.0), om = m.get_double("run.omega", 1.25);
    ModelConfig cfg;
    if (pot == "u1") cfg = ModelConfig::u1(a, r, om);
    else if (pot == "u2") cfg = ModelConfig::u2(a, r, om);
    else if (pot == "free") cfg = ModelConfig::free_trap(a, r, om);
    else throw DomainError("unknown potential '" + pot + "'");
    cfg.validate();
    return cfg;
}

std::string out_dir(const Manifest& m) { return m.get("run.out", "out"); }

// the output directory is not a parameter
void write_stamp(const Manifest& m) {
    Manifest params = m;
    params.values.erase("run.out");
    write_text_atomic((fs::path(out_dir(m)) / "manifest.txt").string(),
                      "# " + std::string(kToolVersion) + " parameters " + params.parameter_hash() + "\n" + m.to_text());
}

std::vector<double> time_grid(double tmax, double dt) {
    if (!(tmax > 0.0) || !(dt > 0.0)) throw DomainError("tmax and dt must be > 0");
    std::vector<double> t;
    const auto n = static_cast<long>(std::floor(tmax / dt + 1e-9));
    for (long i = 0; i <= n; ++i) t.push_back(static_cast<double>(i) * dt);
    return t;
}

SurvivalTrace run_pipeline(Pipeline p, const ModelConfig& cfg, const std::vector<double>& t, double dt, double tol,
                           bool parallel) {
    switch (p) {
    case Pipeline::laplace: {
        InversionOptions io;
        io.tol = tol;
        io.parallel = parallel;
        return invert_survival(cfg, t, io);
    }
    case Pipeline::volterra: {
        const double hmax = std::min(0.025, 2.0 * PI / (40.0 * cfg.omega));
        const int sub = static_cast<int>(std::ceil(dt / hmax - 1e-9));
        const double h = dt / sub;
        VolterraOptions vo;
        vo.parallel = parallel;
        const auto full = survival_from_Y(solve_volterra(cfg, t.back(), h, vo));
        SurvivalTrace tr;
        tr.pipeline = Pipeline::volterra;
        tr.config = cfg;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::size_t k = i * static_cast<std::size_t>(sub);
            if (k >= full.theta.size()) break;
            tr.t.push_back(t[i]);
            tr.theta.push_back(full.theta[k]);
        }
        return tr;
    }
    case Pipeline::oracle: {
        OracleOptions oo;
        oo.sample_dt = dt;
        const double step = std::min(0.01, dt);
        return evolve_pde(cfg, Initial{}, default_grid(cfg, t.back(), 0.05, step), t.back(), oo).trace;
    }
    case Pipeline::asymptotic: break;
    }
    throw DomainError("pipeline not available from the CLI");
}

std::vector<Pipeline> pipelines_of(const std::string& s) {
    if (s == "all") return {Pipeline::laplace, Pipeline::volterra, Pipeline::oracle};
    if (s == "laplace") return {Pipeline::laplace};
    if (s == "volterra") return {Pipeline::volterra};
    if (s == "oracle") return {Pipeline::oracle};
    throw DomainError("unknown pipeline '" + s + "'");
}

Series log_series(const SurvivalTrace& tr, const std::string& label) {
    Series s{label, tr.t, {}};
    for (const cplx th : tr.theta) s.y.push_back(std::log10(std::norm(th)));
    return s;
}

int cmd_survival(const Flags& f) {
    const Manifest m = resolve(f, "survival");
    const ModelConfig cfg = config_of(m);
    if (cfg.potential == Potential::FreeTrap) throw DomainError("survival needs a bound state; use free-trap");
    const double tmax = m.get_double("run.tmax", 100.0), dt = m.get_double("run.dt", 0.5);
    const double tol = m.get_double("run.tol", 1e-9);
    const auto pipes = pipelines_of(m.get("run.pipeline", "laplace"));
    const auto t = time_grid(tmax, dt);
    const fs::path dir = out_dir(m);

    std::vector<SurvivalTrace> traces;
    std::vector<Series> curves;
    for (Pipeline p : pipes) {
        traces.push_back(run_pipeline(p, cfg, t, dt, tol, true));
        curves.push_back(log_series(traces.back(), to_string(p)));
        if (pipes.size() > 1)
            write_theta_csv((dir / (std::string("theta_") + to_string(p) + ".csv")).string(), traces.back());
    }
    write_theta_csv((dir / "theta.csv").string(), traces.front());
    PlotSpec ps;
    ps.title = std::string(to_string(cfg.potential)) + " a=" + format_double(cfg.a) + " r=" + format_double(cfg.r) +
               " omega=" + format_double(cfg.omega);
    ps.xlabel = "t";
    ps.ylabel = "log10 |theta|^2";
    write_text_atomic((dir / "theta.svg").string(), svg_line_plot(curves, ps));

    if (traces.size() > 1) {
        std::string s = "pipeline,reference,max_rel_dev,t_at_max\n";
        for (std::size_t k = 1; k < traces.size(); ++k) {
            double worst = 0.0, at = 0.0;
            const std::size_t n = std::min(traces[0].t.size(), traces[k].t.size());
            for (std::size_t i = 0; i < n; ++i) {
                const double ref = std::norm(traces[0].theta[i]);
                if (ref <= 1e-6) continue;
                const double d = std::abs(std::norm(traces[k].theta[i]) - ref) / ref;
                if (d > worst) worst = d, at = traces[0].t[i];
            }
            s += std::string(to_string(pipes[k])) + ',' + to_string(pipes[0]) + ',' + format_double(worst) + ',' +
                 format_double(at) + '\n';
            std::printf("%s vs %s: max relative deviation %.3e at t = %g\n", to_string(pipes[k]), to_string(pipes[0]),
                        worst, at);
        }
        write_text_atomic((dir / "deviation.csv").string(), s);
    }
    write_stamp(m);
    std::printf("|theta(%g)|^2 = %.6e (%s), wrote %s\n", traces[0].t.back(), std::norm(traces[0].theta.back()),
                to_string(pipes[0]), (dir / "theta.csv").c_str());
    return ok;
}

struct StabArgs {
    double a_lo = 0.59, a_hi = 0.59, om_lo = 1.0, om_hi = 2.0;
    int a_n = 1, om_n = 1, N = 0;
    bool a_set = false, om_set = false;
};

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw DomainError("grid needs at least one point");
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return v;
}

int cmd_stabilize(const Flags& f, StabArgs sa) {
    Manifest m = resolve(f, "stabilize");
    m.set("stabilize.a", format_double(sa.a_lo) + ":" + format_double(sa.a_hi) + ":" + std::to_string(sa.a_n));
    m.set("stabilize.omega", format_double(sa.om_lo) + ":" + format_double(sa.om_hi) + ":" + std::to_string(sa.om_n));
    m.set("stabilize.N", std::to_string(sa.N));
    if (!sa.a_set) sa.a_lo = sa.a_hi = m.get_double("run.a", 0.59);
    if (!sa.om_set && m.has("run.omega") && !m.has("run.r")) sa.om_lo = sa.om_hi = m.get_double("run.omega", 1.0);
    const std::string potname = m.get("run.potential", "u1");
    const Potential pot = potential_from_string(potname);
    std::vector<StabilizationPoint> pts;
    const bool fixed_r = m.has("run.r");
    for (double a : linspace(sa.a_lo, sa.a_hi, sa.a_n)) {
        if (fixed_r) {
            // omega_s at fixed r: scan the omega range per admissible N
            const double r = m.get_double("run.r", 1.0);
            const int nlo = sa.N > 0 ? sa.N : 1, nhi = sa.N > 0 ? sa.N : 4;
            for (int N = nlo; N <= nhi; ++N) {
                if (pot == Potential::U1 && N > 1) break;
                if (!stabilization_g0(pot, a, N)) continue;
                for (const auto& p : stabilizing_frequencies(pot, a, r, N, sa.om_lo, sa.om_hi)) pts.push_back(p);
            }
            continue;
        }
        for (double om : linspace(sa.om_lo, sa.om_hi, sa.om_n)) {
            if (sa.N > 0) {
                if (auto p = stabilization_search(pot, a, om, sa.N)) pts.push_back(*p);
            } else {
                for (const auto& p : stabilization_search_all(pot, a, om)) pts.push_back(p);
            }
        }
    }
    const fs::path dir = out_dir(m);
    write_manifold_csv((dir / "manifold.csv").string(), pts);
    write_stamp(m);
    for (const auto& p : pts)
        std::printf("a=%.6g omega=%.6g r_s=%.8g g0=%.6g N=%d\n", p.a, p.omega, p.r_s, p.g0, p.N);
    std::printf("%zu point(s), wrote %s\n", pts.size(), (dir / "manifold.csv").c_str());
    return ok;
}

struct FitArgs {
    std::string input, kind = "exponential_window";
    std::vector<double> window;
};

int cmd_fit(const Flags& f, const FitArgs& fa) {
    Manifest m = resolve(f, "fit");
    m.set("fit.input", fa.input);
    m.set("fit.kind", fa.kind);
    const auto tr = read_theta_csv(fa.input);
    if (tr.t.size() < 2) throw DomainError(fa.input + ": too few rows");
    const auto abs2 = tr.abs2();
    const double omega = m.get_double("run.omega", 1.0);
    FitReport rep;
    if (fa.kind == "exponential_window") {
        rep = fa.window.empty() ? exponential_window(tr.t, abs2, omega)
                                : fit_exponential(tr.t, abs2, fa.window.at(0), fa.window.at(1), omega);
    } else if (fa.kind == "power_law_tail") {
        double t1, t2;
        if (fa.window.empty()) {
            t2 = tr.t.back();
            t1 = t2 / 10.0;
        } else {
            t1 = fa.window.at(0);
            t2 = fa.window.at(1);
        }
        rep = fit_power_law(tr.t, abs2, t1, t2);
    } else {
        throw DomainError("fit kind must be exponential_window or power_law_tail");
    }
    const fs::path dir = out_dir(m);
    write_text_atomic((dir / "fit.csv").string(), fit_report_csv(rep));
    write_stamp(m);
    std::printf("%s [%g, %g]: slope %.6g, intercept %.6g, rms %.3g, verdict %s\n", to_string(rep.kind), rep.lo, rep.hi,
                rep.slope, rep.intercept, rep.residual, rep.verdict ? "true" : "false");
    return ok;
}

struct TrapArgs {
    int N = 1;
    double scale = 1.0;
    double width = 1.0;
    bool compare = false;
};

int cmd_free_trap(const Flags& f, const TrapArgs& ta) {
    Manifest m = resolve(f, "free-trap");
    m.set("trap.N", std::to_string(ta.N));
    m.set("trap.scale", format_double(ta.scale));
    m.set("trap.width", format_double(ta.width));
    const double a = m.get_double("run.a", 4.0), om = m.get_double("run.omega", 1.5);
    const double tmax = m.get_double("run.tmax", 1000.0), h = m.get_double("run.dt", 0.05);
    std::optional<StabilizationPoint> sp = stabilization_search(a, om, ta.N, StabMode::free);
    double r;
    if (m.has("run.r")) r = m.get_double("run.r", 0.0);
    else if (sp) r = sp->r_s;
    else throw DomainError("no stabilization point at this (a, omega, N); give --r");
    r *= ta.scale;
    const auto packet = make_gaussian(0.0, ta.width, 0.0);
    TrapOptions to;
    to.h = h;
    if (sp) to.g0 = sp->g0;
    auto run = [&](double rr) { return trapped_evolution(ModelConfig::free_trap(a, rr, om), packet, tmax, to); };
    const auto tr = run(r);
    const fs::path dir = out_dir(m);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < tr.t.size(); ++i) rows.push_back({tr.t[i], tr.probability[i]});
    write_table_csv((dir / "localization.csv").string(), {"t", "probability"}, rows);
    rows.clear();
    for (std::size_t i = 0; i < tr.x.size(); ++i) rows.push_back({tr.x[i], tr.profile[i]});
    write_table_csv((dir / "profile.csv").string(), {"x", "profile"}, rows);
    std::vector<Series> curves;
    auto logp = [](const LocalizationTrace& t, const std::string& label) {
        Series s{label, t.t, {}};
        for (double p : t.probability) s.y.push_back(std::log10(p));
        return s;
    };
    curves.push_back(logp(tr, "r = " + format_double(r)));
    std::printf("r = %.8g: P(%g) = %.4e\n", r, tr.t.back(), tr.probability.back());
    if (ta.compare) {
        const auto off = run(0.8 * r);
        curves.push_back(logp(off, "r = 0.8 x " + format_double(r)));
        std::printf("r = %.8g: P(%g) = %.4e, ratio %.3g\n", 0.8 * r, off.t.back(), off.probability.back(),
                    tr.probability.back() / off.probability.back());
    }
    PlotSpec ps;
    ps.title = "free trap a=" + format_double(a) + " omega=" + format_double(om);
    ps.xlabel = "t";
    ps.ylabel = "log10 P(|x| <= L)";
    write_text_atomic((dir / "localization.svg").string(), svg_line_plot(curves, ps));
    write_stamp(m);
    return ok;
}

int cmd_validate(const Flags& f, bool quick, bool corrupt) {
    const Manifest m = resolve(f, "validate");
    ValidateOptions vo;
    const double tol = m.get_double("run.tol", 1e-9);
    vo.tol = tol;
    vo.agreement = 1e-3 * tol / 1e-9;
    vo.include_oracle = !quick;
    vo.corrupt_branch = corrupt;
    const auto res = run_property_suite(vo);
    int failed = 0;
    std::printf("%-48s %-5s %12s %12s  %s\n", "invariant", "ok", "value", "tolerance", "detail");
    for (const auto& c : res) {
        std::printf("%-48s %-5s %12.3e %12.3e  %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.value, c.tolerance,
                    c.detail.c_str());
        failed += !c.pass;
    }
    if (failed) {
        for (const auto& c : res)
            if (!c.pass) std::fprintf(stderr, "failed: %s (%s)\n", c.name.c_str(), c.detail.c_str());
        return validation_failed;
    }
    std::printf("all %zu invariants pass\n", res.size());
    return ok;
}

struct SweepArgs {
    std::string param = "r";
    double from = 0.1, to = 1.0;
    int n = 5;
};

int cmd_sweep(const Flags& f, const SweepArgs& sw) {
    Manifest m = resolve(f, "sweep");
    m.set("sweep.param", sw.param);
    m.set("sweep.range", format_double(sw.from) + ":" + format_double(sw.to) + ":" + std::to_string(sw.n));
    const ModelConfig base = config_of(m);
    if (base.potential == Potential::FreeTrap) throw DomainError("sweep runs the survival pipelines; use free-trap");
    if (sw.param != "r" && sw.param != "omega" && sw.param != "a") throw DomainError("sweep param must be r, omega or a");
    const double tmax = m.get_double("run.tmax", 100.0), dt = m.get_double("run.dt", 0.5);
    const double tol = m.get_double("run.tol", 1e-9);
    const auto pipes = pipelines_of(m.get("run.pipeline", "laplace"));
    const auto t = time_grid(tmax, dt);
    const auto values = linspace(sw.from, sw.to, sw.n);
    const fs::path dir = out_dir(m);

    std::vector<std::vector<double>> rows(values.size());
    std::vector<std::string> errors(values.size());
    // one independent pipeline invocation per point; each writes its own files
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < static_cast<long>(values.size()); ++k) {
        try {
            ModelConfig cfg = base;
            if (sw.param == "r") cfg.r = values[k];
            else if (sw.param == "omega") cfg.omega = values[k];
            else cfg.a = values[k];
            cfg.validate();
            const auto tr = run_pipeline(pipes.front(), cfg, t, dt, tol, false);
            char name[32];
            std::snprintf(name, sizeof name, "point_%03ld", k);
            write_theta_csv((dir / name / "theta.csv").string(), tr);
            double gamma = std::nan("");
            try {
                const auto pole = find_pole(cfg);
                if (pole.converged) gamma = pole.gamma;
            } catch (const Error&) {
            }
            rows[k] = {values[k], std::norm(tr.theta.back()), gamma};
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    }
    for (std::size_t k = 0; k < values.size(); ++k)
        if (!errors[k].empty()) throw ConvergenceError("sweep point " + std::to_string(k) + ": " + errors[k], 0.0);
    write_table_csv((dir / "sweep.csv").string(), {sw.param, "abs2_tmax", "gamma"}, rows);
    write_stamp(m);
    for (const auto& r : rows) std::printf("%s = %.6g: |theta(tmax)|^2 = %.6e, Gamma = %.6e\n", sw.param.c_str(), r[0], r[1], r[2]);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"driven delta-well decay: survival amplitudes, stabilization manifolds, fits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    Flags f;
    auto* survival = app.add_subcommand("survival", "theta(t) for the selected pipeline(s)");
    add_common(survival, f);

    StabArgs sa;
    auto* stabilize = app.add_subcommand("stabilize", "stabilization manifold points over an (a, omega) grid");
    add_common(stabilize, f);
    stabilize->add_option("--a-range", [&](const CLI::results_t& v) {
        if (v.size() != 3) return false;
        sa.a_lo = std::stod(v[0]);
        sa.a_hi = std::stod(v[1]);
        sa.a_n = std::stoi(v[2]);
        sa.a_set = true;
        return true;
    }, "lo hi n")->expected(3);
    stabilize->add_option("--omega-range", [&](const CLI::results_t& v) {
        if (v.size() != 3) return false;
        sa.om_lo = std::stod(v[0]);
        sa.om_hi = std::stod(v[1]);
        sa.om_n = std::stoi(v[2]);
        sa.om_set = true;
        return true;
    }, "lo hi n (with --r: scan interval for omega_s)")->expected(3);
    stabilize->add_option("--N", sa.N, "photon order (0: all admissible)");

    FitArgs fa;
    auto* fit = app.add_subcommand("fit", "fit a theta.csv trace");
    add_common(fit, f);
    fit->add_option("--input", fa.input, "theta.csv")->required();
    fit->add_option("--kind", fa.kind, "exponential_window or power_law_tail")
        ->check(CLI::IsMember({"exponential_window", "power_law_tail"}));
    fit->add_option("--window", fa.window, "t1 t2")->expected(2);

    TrapArgs ta;
    auto* trap = app.add_subcommand("free-trap", "localization of a free packet in the driven trap");
    add_common(trap, f);
    trap->add_option("--N", ta.N, "photon order of the stabilization point");
    trap->add_option("--scale", ta.scale, "multiply r by this");
    trap->add_option("--width", ta.width, "gaussian packet width");
    trap->add_flag("--compare", ta.compare, "also run at 0.8 r");

    bool quick = false, corrupt = false;
    auto* validate = app.add_subcommand("validate", "cross-pipeline invariant suite");
    add_common(validate, f);
    validate->add_flag("--quick", quick, "skip the PDE oracle checks");
    validate->add_flag("--corrupt-branch", corrupt, "negative control: flip a branch sign")->group("");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "survival over a parameter range, one worker per point");
    add_common(sweep, f);
    sweep->add_option("--param", sw.param, "r, omega or a");
    sweep->add_option("--from", sw.from);
    sweep->add_option("--to", sw.to);
    sweep->add_option("--n", sw.n);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : bad_manifest;
    }

    try {
        if (*survival) return cmd_survival(f);
        if (*stabilize) return cmd_stabilize(f, sa);
        if (*fit) return cmd_fit(f, fa);
        if (*trap) return cmd_free_trap(f, ta);
        if (*validate) return cmd_validate(f, quick, corrupt);
        if (*sweep) return cmd_sweep(f, sw);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return bad_manifest;
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return no_convergence;
    } catch (const PoleError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return no_convergence;
    } catch (const RefinementError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return no_convergence;
    } catch (const StabilityError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return no_convergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return failure;
    }
    return failure;
}
