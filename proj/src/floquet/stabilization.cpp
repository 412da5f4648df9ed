#include "ddecay/floquet/stabilization.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <functional>

#include "ddecay/branchcore.hpp"
#include "ddecay/errors.hpp"

namespace dd {

namespace {

constexpr double kAcceptDefect = 1e-8;

double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
}

ModelConfig config_for(Potential pot, double a, double r, double omega) {
    if (pot == Potential::FreeTrap) return ModelConfig::free_trap(a, r, omega);
    if (pot == Potential::U2) return ModelConfig::u2(a, r, omega);
    return ModelConfig::u1(a, r, omega);
}

void note(std::string* d, const std::string& msg) {
    if (d) *d = msg;
}

}  // namespace

double stabilization_coefficient(const ModelConfig& cfg, double g0, int n) {
    const double w = (cfg.binding ? 1.0 : 0.0) + g0 + cfg.omega * n;
    if (!(w > 0.0)) throw DomainError("stabilization coefficient needs a closed channel at n = " + std::to_string(n));
    const double kappa = std::sqrt(w);
    const KPair k = cfg.binding ? bound_kernels_from_root(kappa, cfg.a) : free_kernels_from_root(kappa, cfg.a);
    if (cfg.potential == Potential::U1) return k.same.real();
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;
    return (k.same + sign * k.opp).real();
}

std::vector<double> rho_recursion(const ModelConfig& cfg, double g0, double r, int n_max) {
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    if (!(r > 0.0)) throw DomainError("r must be > 0");
    std::vector<double> rho(static_cast<std::size_t>(n_max));
    rho[0] = 2.0 / (r * stabilization_coefficient(cfg, g0, 1));
    for (int n = 2; n <= n_max; ++n) {
        const double prev = rho[static_cast<std::size_t>(n - 2)];
        if (prev == 0.0) throw DomainError("rho_" + std::to_string(n - 1) + " = 0: no decaying solution at this r");
        rho[static_cast<std::size_t>(n - 1)] = 2.0 / (r * stabilization_coefficient(cfg, g0, n)) - 1.0 / prev;
    }
    return rho;
}

double matching_defect(const ModelConfig& cfg, double g0, double r, int n_max) {
    double rho_min = 0.0;
    for (int n = n_max; n >= 2; --n) rho_min = 1.0 / (2.0 / (r * stabilization_coefficient(cfg, g0, n)) - rho_min);
    return 1.0 - 0.5 * r * stabilization_coefficient(cfg, g0, 1) * rho_min;
}

bool check_inequalities(const ModelConfig& cfg, double g0) {
    const double k1 = stabilization_coefficient(cfg, g0, 1);
    const double k2 = stabilization_coefficient(cfg, g0, 2);
    const double k3 = stabilization_coefficient(cfg, g0, 3);
    return k1 * k2 >= 2.0 * k3 * (2.0 * k3 - k2) && k1 * k2 >= k3 * (4.0 * k3 - k2);
}

std::optional<double> stabilization_g0(Potential pot, double a, int N) {
    if (!(a > 0.0) || N < 1) return std::nullopt;
    if (pot == Potential::U2) return -1.0 - std::pow(PI * N / a, 2);
    if (pot == Potential::FreeTrap) return -std::pow(PI * N / a, 2);
    // U1: the harmonic-0 kernel k+ vanishes on the imaginary axis
    if (N != 1 || a <= 0.5) return std::nullopt;
    auto f = [a](double kappa) { return std::exp(-2.0 * a * kappa) - 1.0 + kappa; };
    double lo = 0.0;
    for (int i = 1; i <= 2000; ++i) {
        const double k = i / 2000.0;
        if (f(k) > 0.0) {
            lo = (i - 1) / 2000.0;
            break;
        }
    }
    if (lo == 0.0) lo = 1e-9;
    if (f(lo) >= 0.0) return std::nullopt;
    const double kappa = bisect_root(f, lo, lo + 1.0 / 2000.0);
    return kappa * kappa - 1.0;
}

std::optional<StabilizationPoint> stabilization_search(Potential pot, double a, double omega, int N,
                                                       std::string* diagnostic) {
    if (!(a > 0.0) || !(omega > 0.0) || N < 1) throw DomainError("stabilization search needs a > 0, omega > 0, N >= 1");
    const bool bound = pot != Potential::FreeTrap;
    if (bound && omega <= 1.0) {
        note(diagnostic, "bound mode needs omega > 1");
        return std::nullopt;
    }
    const auto g = stabilization_g0(pot, a, N);
    if (!g) {
        note(diagnostic, pot == Potential::U1 ? "U1 needs a > 1/2 and N = 1" : "no g0 for this N");
        return std::nullopt;
    }
    const double g0 = *g;
    const bool admissible = pot == Potential::U2 ? (g0 > -omega && g0 < -1.0)
                            : pot == Potential::FreeTrap ? (g0 > -omega && g0 < 0.0)
                                                         : (g0 > -1.0 && g0 < 0.0);
    if (!admissible) {
        note(diagnostic, "g0 outside the admissible interval");
        return std::nullopt;
    }
    const ModelConfig cfg = config_for(pot, a, 1.0, omega);
    const bool ineq = check_inequalities(cfg, g0);
    const int samples = 400;
    const double lr0 = std::log(1e-3), lr1 = std::log(20.0);
    auto D = [&](double r) { return matching_defect(cfg, g0, r); };
    double rp = std::exp(lr0), dp = D(rp);
    for (int i = 1; i <= samples; ++i) {
        const double r = std::exp(lr0 + (lr1 - lr0) * i / samples);
        const double d = D(r);
        if (std::signbit(d) != std::signbit(dp) && std::isfinite(d) && std::isfinite(dp)) {
            const double rs = bisect_root(D, rp, r);
            const double res = std::abs(D(rs));
            if (res < kAcceptDefect) {
                note(diagnostic, ineq ? "" : "solvability inequalities fail at g0");
                return StabilizationPoint{pot, a, omega, rs, g0, N, res, ineq};
            }
        }
        rp = r;
        dp = d;
    }
    note(diagnostic, "no sign change of the matching defect for r in [1e-3, 20]");
    return std::nullopt;
}

std::optional<StabilizationPoint> stabilization_search(double a, double omega, int N, StabMode mode,
                                                       std::string* diagnostic) {
    return stabilization_search(mode == StabMode::free ? Potential::FreeTrap : Potential::U2, a, omega, N, diagnostic);
}

std::vector<StabilizationPoint> stabilization_search_all(Potential pot, double a, double omega) {
    std::vector<StabilizationPoint> out;
    for (int N = 1; N <= 64; ++N) {
        const auto g = stabilization_g0(pot, a, N);
        if (!g) break;
        if (pot == Potential::U2 && *g <= -omega) break;
        if (pot == Potential::FreeTrap && *g <= -omega) break;
        if (auto p = stabilization_search(pot, a, omega, N)) out.push_back(*p);
    }
    return out;
}

std::vector<StabilizationPoint> stabilizing_frequencies(Potential pot, double a, double r, int N, double omega_lo,
                                                        double omega_hi, int samples) {
    std::vector<StabilizationPoint> out;
    const auto g = stabilization_g0(pot, a, N);
    if (!g || !(r > 0.0)) return out;
    const double g0 = *g;
    double lo = std::max(omega_lo, -g0 + 1e-9);
    if (pot != Potential::FreeTrap) lo = std::max(lo, 1.0 + 1e-9);
    if (!(omega_hi > lo)) return out;
    auto D = [&](double om) { return matching_defect(config_for(pot, a, r, om), g0, r); };
    double wp = lo, dp = D(lo);
    for (int i = 1; i <= samples; ++i) {
        const double w = lo + (omega_hi - lo) * i / samples;
        const double d = D(w);
        if (std::signbit(d) != std::signbit(dp) && std::isfinite(d) && std::isfinite(dp)) {
            const double ws = bisect_root(D, wp, w);
            const double res = std::abs(D(ws));
            if (res < kAcceptDefect)
                out.push_back({pot, a, ws, r, g0, N, res, check_inequalities(config_for(pot, a, r, ws), g0)});
        }
        wp = w;
        dp = d;
    }
    return out;
}

}  // namespace dd
