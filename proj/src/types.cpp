#include "ddecay/types.hpp"

#include <algorithm>
#include <cmath>

#include "ddecay/errors.hpp"

namespace dd {

void ModelConfig::validate() const {
    if (!std::isfinite(a) || a < 0.0) throw DomainError("a must be finite and >= 0");
    // r < 0 flips the sign of the drive (used by the parity check)
    if (!std::isfinite(r)) throw DomainError("r must be finite");
    if (!std::isfinite(omega) || omega <= 0.0) throw DomainError("omega must be > 0");
    if (potential == Potential::FreeTrap && binding)
        throw DomainError("FreeTrap requires binding = false");
    if (potential != Potential::FreeTrap && !binding)
        throw DomainError("U1/U2 are defined with the bound state present");
}

ModelConfig ModelConfig::u1(double a, double r, double omega) {
    return {Potential::U1, a, true, r, omega};
}
ModelConfig ModelConfig::u2(double a, double r, double omega) {
    return {Potential::U2, a, true, r, omega};
}
ModelConfig ModelConfig::free_trap(double a, double r, double omega) {
    return {Potential::FreeTrap, a, false, r, omega};
}

Wells wells_of(const ModelConfig& cfg) {
    Wells w;
    const double ub = cfg.binding ? std::exp(-cfg.a) : 0.0;
    switch (cfg.potential) {
    case Potential::U1:
        w.count = 1;
        w.x = {cfg.a, 0.0};
        w.c = {1.0, 0.0};
        w.u = {ub, 0.0};
        break;
    case Potential::U2:
    case Potential::FreeTrap:
        // slot 0 is the well at +a, slot 1 at -a: U2 = 2[delta(x+a) - delta(x-a)]
        w.count = 2;
        w.x = {cfg.a, -cfg.a};
        w.c = {-1.0, 1.0};
        w.u = {ub, ub};
        break;
    }
    return w;
}

const char* to_string(Pipeline p) {
    switch (p) {
    case Pipeline::laplace: return "laplace";
    case Pipeline::volterra: return "volterra";
    case Pipeline::oracle: return "oracle";
    case Pipeline::asymptotic: return "asymptotic";
    }
    return "?";
}

const char* to_string(Potential p) {
    switch (p) {
    case Potential::U1: return "u1";
    case Potential::U2: return "u2";
    case Potential::FreeTrap: return "free";
    }
    return "?";
}

Potential potential_from_string(const std::string& s) {
    if (s == "u1") return Potential::U1;
    if (s == "u2") return Potential::U2;
    if (s == "free") return Potential::FreeTrap;
    throw DomainError("unknown potential '" + s + "'");
}

std::vector<double> SurvivalTrace::abs2() const {
    std::vector<double> out(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) out[i] = std::norm(theta[i]);
    return out;
}

double SurvivalTrace::max_abs() const {
    double m = 0.0;
    for (auto z : theta) m = std::max(m, std::abs(z));
    return m;
}

bool all_finite(const std::vector<cplx>& v) {
    return std::all_of(v.begin(), v.end(),
                       [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

}  // namespace dd
