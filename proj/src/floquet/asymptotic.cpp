#include "ddecay/floquet/asymptotic.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <string>

#include "ddecay/errors.hpp"
#include "ddecay/quadrature.hpp"

namespace dd {

LambdaSigma lambda_sigma(const ModelConfig& cfg, const PoleResult& pole) {
    if (!(cfg.r > 0.0)) throw DomainError("lambda, sigma need r > 0");
    const double r2 = cfg.r * cfg.r;
    const double s = cfg.omega - 1.0 - pole.stark_shift;
    if (!(s > 0.0)) throw DomainError("lambda needs omega > 1 + Delta");
    LambdaSigma ls;
    ls.lambda = -pole.xi0.real() / (r2 * std::sqrt(s));
    ls.sigma = pole.stark_shift / r2;
    return ls;
}

LambdaSigma lambda_sigma_at_one(Potential pot, double a, double r) {
    const double d[3] = {0.05, 0.1, 0.2};
    double l[3], s[3];
    for (int k = 0; k < 3; ++k) {
        ModelConfig cfg = pot == Potential::U1 ? ModelConfig::u1(a, r, 1.0 + d[k]) : ModelConfig::u2(a, r, 1.0 + d[k]);
        const PoleResult p = find_pole(cfg);
        const LambdaSigma ls = lambda_sigma(cfg, p);
        l[k] = ls.lambda;
        s[k] = ls.sigma;
    }
    // Lagrange weights at 0 for nodes d
    auto at0 = [&](const double* v) {
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            double w = 1.0;
            for (int j = 0; j < 3; ++j)
                if (j != i) w *= (0.0 - d[j]) / (d[i] - d[j]);
            acc += w * v[i];
        }
        return acc;
    };
    return {at0(l), at0(s)};
}

cplx theta_asymptotic(const ModelConfig& cfg, const PoleResult& pole, double t) {
    if (pole.near_branch_point)
        throw DomainError("pole within the resonance distance of a branch point; use theta_resonance");
    if (!pole.converged) throw DomainError("theta_asymptotic needs a converged pole");
    if (t < 0.0) throw DomainError("t must be >= 0");
    const double D = pole.stark_shift, om = cfg.omega;
    const double s = om - 1.0 - D;
    if (!(s > 0.0)) throw DomainError("theta_asymptotic needs omega > 1 + Delta (one-photon regime)");
    const cplx pole_term = std::exp(pole.xi0 * t);
    const cplx ph = std::exp(I * (s * t + PI / 4));
    const cplx cut = om * ph * pole.xi0.real() /
                     (std::sqrt(PI) * (om * om - (1.0 + D) * (1.0 + D)) * std::pow(s * t + 1.0, 1.5));
    return pole_term + cut;
}

SurvivalTrace theta_asymptotic_trace(const ModelConfig& cfg, const PoleResult& pole, const std::vector<double>& t) {
    SurvivalTrace tr;
    tr.config = cfg;
    tr.pipeline = Pipeline::asymptotic;
    tr.t = t;
    for (double tt : t) tr.theta.push_back(theta_asymptotic(cfg, pole, tt));
    return tr;
}

cplx theta_resonance(double r, double t, double h_param, double lambda1) {
    const double c = t * std::pow(r, 4) * lambda1 * lambda1 / 4.0;
    if (!(c > 0.0)) throw DomainError("resonance integral diverges at t r^4 lambda^2 = 0");
    auto f = [&](double x) -> cplx {
        const double x2 = x * x, q = x2 - h_param;
        return std::exp(-c * x2) * x2 / cplx(q * q, x2);
    };
    const double xmax = std::sqrt(46.0 / c);
    QuadOptions qo;
    qo.abs_tol = 1e-14;
    qo.rel_tol = 1e-11;
    qo.max_panels = 4000;
    cplx acc = 0.0;
    double err = 0.0;
    bool ok = true;
    const double mid = h_param > 0.0 ? std::sqrt(h_param) : 0.0;
    for (auto [lo, hi] : {std::pair{0.0, std::min(mid, xmax)}, std::pair{std::min(mid, xmax), xmax}}) {
        if (hi <= lo) continue;
        const QuadResult q = integrate(f, lo, hi, qo);
        acc += q.value;
        err += q.error;
        ok = ok && q.converged;
    }
    if (!ok) throw ConvergenceError("resonance integral did not converge at t = " + std::to_string(t), err);
    return std::polar(1.0, PI / 4) / PI * 2.0 * acc;
}

SurvivalTrace theta_resonance_trace(const ModelConfig& cfg, const std::vector<double>& t, double h_param,
                                    double lambda1) {
    SurvivalTrace tr;
    tr.config = cfg;
    tr.pipeline = Pipeline::asymptotic;
    tr.t = t;
    for (double tt : t) tr.theta.push_back(theta_resonance(cfg.r, tt, h_param, lambda1));
    return tr;
}

ResonanceTuning tune_resonance(Potential pot, double a, double r) {
    auto make = [&](double om) { return pot == Potential::U1 ? ModelConfig::u1(a, r, om) : ModelConfig::u2(a, r, om); };
    ResonanceTuning best;
    auto g = [&](double om) {
        const PoleResult p = find_pole(make(om));
        const double m = p.stark_shift - (om - 1.0);
        if (best.omega == 1.0 || std::abs(m) < std::abs(best.mismatch)) best = {om, p, m};
        return m;
    };
    // start slightly above the threshold so the pole finder sees the one-photon side
    double x0 = 1.0 + 0.5 * r * r, f0;
    try {
        f0 = g(x0);
        double x1 = 1.0 + best.pole.stark_shift;
        double f1 = g(x1);
        for (int k = 0; k < 30 && f1 != f0; ++k) {
            const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
            x0 = x1;
            f0 = f1;
            x1 = x2;
            f1 = g(x1);
            if (std::abs(f1) < 1e-14 || std::abs(x1 - x0) < 1e-15) break;
        }
    } catch (const ConvergenceError&) {
        // the pole finder gives up once the pole is within rounding of the branch point
    }
    if (best.omega == 1.0) throw ConvergenceError("resonance tuning found no pole", 0.0);
    return best;
}

HFit fit_h_param(const SurvivalTrace& trace, double lambda1, double c_min, double h_lo, double h_hi) {
    const double r = trace.config.r;
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        const double c = trace.t[i] * std::pow(r, 4) * lambda1 * lambda1 / 4.0;
        const double y = std::norm(trace.theta[i]);
        if (c >= c_min && y > 0.0) {
            ts.push_back(trace.t[i]);
            ys.push_back(std::log10(y));
        }
    }
    if (ts.size() < 2) throw DomainError("fit_h_param: fewer than two samples in the formula regime");
    auto cost = [&](double h) {
        double s = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double d = std::log10(std::norm(theta_resonance(r, ts[i], h, lambda1))) - ys[i];
            s += d * d;
        }
        return s;
    };
    const auto m = boost::math::tools::brent_find_minima(cost, h_lo, h_hi, 40);
    HFit fit;
    fit.h = m.first;
    fit.rms = std::sqrt(m.second / static_cast<double>(ts.size()));
    fit.points = static_cast<int>(ts.size());
    return fit;
}

}  // namespace dd
