#include "ddecay/oracle/crank_nicolson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddecay/errors.hpp"
#include "ddecay/floquet/poles.hpp"

namespace dd {

namespace {

struct Lattice {
    double X = 0.0, dx = 0.0;
    std::size_t n = 0;  // nodes 0..n, walls at 0 and n
    double x(std::size_t i) const { return -X + dx * static_cast<double>(i); }
};

Lattice make_lattice(const GridSpec& g, double a) {
    if (!(g.dx > 0.0) || !(g.X > 0.0) || !(g.dt > 0.0)) throw DomainError("grid needs X, dx, dt > 0");
    Lattice L;
    L.dx = g.dx;
    if (g.snap && a > 0.0) L.dx = a / std::ceil(a / g.dx - 1e-9);
    const double cells = std::ceil(g.X / L.dx - 1e-9);
    L.X = cells * L.dx;
    L.n = static_cast<std::size_t>(2.0 * cells);
    return L;
}

// node weights of delta(x - x0): 1/dx on the nearest node, split linearly off-grid
void add_delta(const Lattice& L, double x0, double strength, std::vector<double>& v) {
    const double s = (x0 + L.X) / L.dx;
    const double fl = std::floor(s);
    const double f = s - fl;
    const std::size_t i = static_cast<std::size_t>(fl);
    if (i < 1 || i + 1 >= L.n) throw DomainError("delta outside the box");
    if (f < 1e-9) {
        v[i] += strength / L.dx;
    } else if (f > 1.0 - 1e-9) {
        v[i + 1] += strength / L.dx;
    } else {
        v[i] += (1.0 - f) * strength / L.dx;
        v[i + 1] += f * strength / L.dx;
    }
}

// Thomas algorithm, constant off-diagonals c
template <class T>
void thomas(const std::vector<T>& diag, T off, std::vector<T>& rhs, std::vector<T>& work) {
    const std::size_t m = diag.size();
    work.resize(m);
    T b = diag[0];
    rhs[0] /= b;
    for (std::size_t i = 1; i < m; ++i) {
        work[i] = off / b;
        b = diag[i] - off * work[i];
        rhs[i] = (rhs[i] - off * rhs[i - 1]) / b;
    }
    for (std::size_t i = m - 1; i-- > 0;) rhs[i] -= work[i + 1] * rhs[i + 1];
}

}  // namespace

double required_half_width(const ModelConfig& cfg, double t_max) {
    const int N = cfg.binding ? multiphoton_order(cfg.omega) : 1;
    const double e = cfg.binding ? (N + 1) * cfg.omega - 1.0 : cfg.omega;
    return 4.0 * std::sqrt(std::max(e, 0.0)) * t_max;
}

GridSpec default_grid(const ModelConfig& cfg, double t_max, double dx, double dt) {
    GridSpec g;
    g.dx = dx;
    g.dt = dt;
    g.X = std::max(required_half_width(cfg, t_max), cfg.a + 20.0);
    return g;
}

DiscreteBound discrete_bound_state(const GridSpec& grid) {
    const Lattice L = make_lattice(grid, 0.0);
    const std::size_t m = L.n - 1;
    std::vector<double> v(L.n + 1, 0.0);
    add_delta(L, 0.0, -2.0, v);
    const double off = -1.0 / (L.dx * L.dx);
    // inverse iteration, shift below the eigenvalue
    const double shift = -1.2;
    std::vector<double> diag(m), y(m, 0.0), work;
    for (std::size_t i = 0; i < m; ++i) {
        diag[i] = 2.0 / (L.dx * L.dx) + v[i + 1] - shift;
        y[i] = std::exp(-std::abs(L.x(i + 1)));
    }
    double E = 0.0;
    for (int it = 0; it < 60; ++it) {
        thomas(diag, off, y, work);
        double nrm = 0.0;
        for (double q : y) nrm += q * q * L.dx;
        nrm = std::sqrt(nrm);
        for (double& q : y) q /= nrm;
        // Rayleigh quotient
        double num = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double lap = 2.0 * y[i] - (i > 0 ? y[i - 1] : 0.0) - (i + 1 < m ? y[i + 1] : 0.0);
            num += y[i] * (lap / (L.dx * L.dx) + v[i + 1] * y[i]) * L.dx;
        }
        if (std::abs(num - E) < 1e-15 * std::abs(num)) {
            E = num;
            break;
        }
        E = num;
    }
    DiscreteBound db;
    db.energy = E;
    db.x.resize(L.n + 1);
    db.phi.assign(L.n + 1, 0.0);
    for (std::size_t i = 0; i <= L.n; ++i) db.x[i] = L.x(i);
    for (std::size_t i = 0; i < m; ++i) db.phi[i + 1] = y[i];
    const double p0 = db.phi[L.n / 2];
    for (std::size_t i = 0; i <= L.n; ++i)
        db.profile_error = std::max(db.profile_error, std::abs(db.phi[i] / p0 - std::exp(-std::abs(db.x[i]))));
    return db;
}

OracleRun evolve_pde(const ModelConfig& cfg, const Initial& init, const GridSpec& grid, double t_max,
                     const OracleOptions& opt) {
    cfg.validate();
    if (!(t_max > 0.0)) throw DomainError("t_max must be > 0");
    const bool bound = init.kind == Initial::Kind::bound_state;
    if (bound && !cfg.binding) throw DomainError("bound-state initial condition needs binding");
    if (bound && grid.dx > 0.05 + 1e-12) throw DomainError("dx must be <= 0.05 to resolve the bound state");
    if (grid.boundary == Boundary::hard_wall && grid.X < required_half_width(cfg, t_max) * (1.0 - 1e-12))
        throw DomainError("box half-width " + std::to_string(grid.X) + " below 4 k_max T = " +
                          std::to_string(required_half_width(cfg, t_max)));
    const Lattice L = make_lattice(grid, cfg.a);
    const std::size_t m = L.n - 1;
    const double dx = L.dx, dt = grid.dt;
    const Wells w = wells_of(cfg);

    std::vector<double> vb(L.n + 1, 0.0), vd(L.n + 1, 0.0);
    if (cfg.binding) add_delta(L, 0.0, -2.0, vb);
    for (int j = 0; j < w.count; ++j) add_delta(L, w.x[j], 2.0 * w.c[j], vd);
    std::vector<double> absorb(L.n + 1, 0.0);
    if (grid.boundary == Boundary::absorbing) {
        for (std::size_t i = 0; i <= L.n; ++i) {
            const double s = (std::abs(L.x(i)) - (L.X - grid.absorb_width)) / grid.absorb_width;
            if (s > 0.0) absorb[i] = grid.absorb_strength * s * s;
        }
    }

    OracleRun run;
    run.grid = grid;
    run.grid.dx = dx;
    run.grid.X = L.X;
    GridSpec gb = grid;
    gb.dx = dx;
    gb.X = L.X;
    gb.snap = false;
    DiscreteBound db;
    if (cfg.binding) {
        db = discrete_bound_state(gb);
        run.bound_energy = db.energy;
    }

    std::vector<cplx> psi(m);
    if (bound) {
        for (std::size_t i = 0; i < m; ++i) psi[i] = db.phi[i + 1];
    } else {
        for (std::size_t i = 0; i < m; ++i) psi[i] = free_evolve(init.packet, L.x(i + 1), 0.0);
        double nrm = 0.0;
        for (const cplx& q : psi) nrm += std::norm(q) * dx;
        for (cplx& q : psi) q /= std::sqrt(nrm);
    }
    const double Lw = opt.L > 0.0 ? opt.L : 2.0 * cfg.a + 5.0;
    run.L = Lw;

    auto observe = [&](double t) {
        double nrm = 0.0, loc = 0.0;
        cplx ov = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = std::norm(psi[i]) * dx;
            nrm += d;
            if (std::abs(L.x(i + 1)) <= Lw + 1e-12) loc += d;
            if (cfg.binding) ov += db.phi[i + 1] * psi[i] * dx;
        }
        run.norm.push_back(nrm);
        run.localization.push_back(loc);
        run.trace.t.push_back(t);
        run.trace.theta.push_back(cfg.binding ? std::polar(1.0, db.energy * t) * ov : cplx(0.0));
        if (grid.boundary == Boundary::hard_wall && t > 0.0) {
            const double rate = std::abs(nrm - 1.0) / t;
            run.worst_drift_rate = std::max(run.worst_drift_rate, rate);
            if (rate > opt.drift_limit)
                throw StabilityError("norm drift " + std::to_string(rate) + " per unit time at t = " + std::to_string(t));
        }
    };
    auto snap = [&](double t) {
        Snapshot s;
        s.t = t;
        s.x.resize(L.n + 1);
        s.psi.assign(L.n + 1, 0.0);
        for (std::size_t i = 0; i <= L.n; ++i) s.x[i] = L.x(i);
        for (std::size_t i = 0; i < m; ++i) s.psi[i + 1] = psi[i];
        run.snapshots.push_back(std::move(s));
    };

    run.trace.config = cfg;
    run.trace.pipeline = Pipeline::oracle;
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_max / dt));
    const std::size_t every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(opt.sample_dt / dt)));
    std::vector<std::size_t> snap_steps;
    for (double ts : opt.snapshot_times) snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / dt)));

    observe(0.0);
    if (std::find(snap_steps.begin(), snap_steps.end(), 0) != snap_steps.end()) snap(0.0);
    const double k2 = 1.0 / (dx * dx);
    const cplx half = 0.5 * I * dt;
    const cplx off_a = -half * k2;  // (1 + i dt/2 H) off-diagonal
    std::vector<cplx> diag(m), rhs(m), work;
    for (std::size_t s = 1; s <= steps; ++s) {
        const double tm = (static_cast<double>(s) - 0.5) * dt;
        const double e = cfg.r * std::sin(cfg.omega * tm);
        for (std::size_t i = 0; i < m; ++i) {
            const cplx Vi = vb[i + 1] + e * vd[i + 1] - I * absorb[i + 1];
            const cplx Hd = 2.0 * k2 + Vi;
            diag[i] = 1.0 + half * Hd;
            // (1 - i dt/2 H) psi
            cplx hp = Hd * psi[i];
            if (i > 0) hp -= k2 * psi[i - 1];
            if (i + 1 < m) hp -= k2 * psi[i + 1];
            rhs[i] = psi[i] - half * hp;
        }
        thomas(diag, off_a, rhs, work);
        psi.swap(rhs);
        if (s % every == 0) observe(dt * static_cast<double>(s));
        if (std::find(snap_steps.begin(), snap_steps.end(), s) != snap_steps.end()) snap(dt * static_cast<double>(s));
    }
    return run;
}

RichardsonReport richardson_check(const ModelConfig& cfg, const Initial& init, const GridSpec& grid, double t_max) {
    RichardsonReport rep;
    OracleOptions o;
    o.sample_dt = t_max;
    for (int k = 0; k < 3; ++k) {
        GridSpec g = grid;
        g.dx = grid.dx / std::pow(2.0, k);
        g.dt = grid.dt / std::pow(2.0, k);
        const OracleRun run = evolve_pde(cfg, init, g, t_max, o);
        rep.value.push_back(init.kind == Initial::Kind::bound_state ? std::norm(run.trace.theta.back())
                                                                   : run.localization.back());
    }
    const double d1 = rep.value[0] - rep.value[1], d2 = rep.value[1] - rep.value[2];
    rep.monotone = d1 * d2 > 0.0 && std::abs(d2) < std::abs(d1);
    rep.order = (d1 != 0.0 && d2 != 0.0) ? std::log2(std::abs(d1 / d2)) : 0.0;
    const double f = std::pow(2.0, rep.order > 0.5 ? rep.order : 2.0);
    rep.extrapolated = rep.value[2] - d2 / (f - 1.0);
    return rep;
}

}  // namespace dd
