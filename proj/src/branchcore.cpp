#include "ddecay/branchcore.hpp"

#include <cmath>
#include <string>

#include "ddecay/errors.hpp"

namespace dd {

namespace {

void check_finite(cplx p) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
        throw DomainError("non-finite Laplace variable");
}

cplx horizontal_sqrt(cplx w, Side side) {
    const double x = w.real(), y = w.imag();
    if (x == 0.0 && y > 0.0) {
        if (side == Side::principal)
            throw BranchAmbiguityError("on the horizontal cut with side = principal");
        const cplx s = std::sqrt(y) * std::polar(1.0, PI / 4);
        return side == Side::above ? s : -s;
    }
    if (y == 0.0 && x < 0.0) return cplx(0.0, -std::sqrt(-x));
    const cplx s = std::sqrt(w);
    return (x < 0.0 && y > 0.0) ? -s : s;
}

cplx tilted_sqrt(cplx w, double tilt, Side side) {
    const double psi = PI / 2 + tilt;
    double th = std::atan2(w.imag(), w.real());
    if (th > psi) th -= 2 * PI;
    const double tol = 1e-14;
    if (std::abs(th - psi) <= tol || std::abs(th - (psi - 2 * PI)) <= tol) {
        if (side == Side::principal)
            throw BranchAmbiguityError("on the tilted cut with side = principal");
        const cplx s = std::polar(std::sqrt(std::abs(w)), psi / 2);
        return side == Side::above ? s : -s;
    }
    return std::polar(std::sqrt(std::abs(w)), th / 2);
}

}  // namespace

cplx branch_sqrt(cplx w, const BranchSpec& spec) {
    if (w == cplx(0.0, 0.0)) return 0.0;
    if (spec.cut == Cut::vertical_principal) {
        if (w.imag() == 0.0 && w.real() < 0.0) {
            if (spec.side == Side::principal)
                throw BranchAmbiguityError("on the vertical cut with side = principal");
            const double s = std::sqrt(-w.real());
            return spec.side == Side::above ? cplx(0.0, -s) : cplx(0.0, s);
        }
        return std::sqrt(w);
    }
    if (spec.tilt == 0.0) return horizontal_sqrt(w, spec.side);
    if (!(spec.tilt > 0.0 && spec.tilt < PI / 2)) throw DomainError("cut tilt must lie in [0, pi/2)");
    return tilted_sqrt(w, spec.tilt, spec.side);
}

cplx sqrt_one_minus_ip(cplx p, const BranchSpec& spec) {
    check_finite(p);
    return branch_sqrt(1.0 - I * p, spec);
}

cplx sqrt_minus_ip(cplx p, const BranchSpec& spec) {
    check_finite(p);
    return branch_sqrt(-I * p, spec);
}

cplx expm1c(cplx z) {
    const double x = z.real(), y = z.imag();
    const double s = std::sin(0.5 * y);
    const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

KPair bound_kernels_from_root(cplx kappa, double a) {
    if (kappa == cplx(0.0, 0.0)) return {2.0 * a - 1.0, -1.0};
    const cplx d = kappa - 1.0;
    if (d == cplx(0.0, 0.0))
        throw PoleError("k-(p) has a simple pole at p = 0", 2.0 * I * std::exp(-2.0 * a));
    const cplx e = std::exp(-2.0 * a * kappa);
    // k+ = (1 + k-)/kappa written without the cancellation at small kappa
    return {(kappa + expm1c(-2.0 * a * kappa)) / (kappa * d), e / d};
}

KPair free_kernels_from_root(cplx kappa, double a) {
    if (kappa == cplx(0.0, 0.0)) throw BranchPointError("free kernel evaluated at the branch point p = 0");
    return {1.0 / kappa, std::exp(-2.0 * a * kappa) / kappa};
}

cplx kernel_k_minus(cplx p, double a, const BranchSpec& spec) {
    if (a < 0.0) throw DomainError("a must be >= 0");
    return bound_kernels_from_root(sqrt_one_minus_ip(p, spec), a).opp;
}

cplx kernel_k_plus(cplx p, double a, const BranchSpec& spec) {
    if (a < 0.0) throw DomainError("a must be >= 0");
    return bound_kernels_from_root(sqrt_one_minus_ip(p, spec), a).same;
}

cplx free_kernel(double x, cplx p, double a, WellSign sign, const BranchSpec& spec) {
    const cplx kappa = sqrt_minus_ip(p, spec);
    if (kappa == cplx(0.0, 0.0)) throw BranchPointError("free kernel evaluated at the branch point p = 0");
    const double d = sign == WellSign::minus ? std::abs(x - a) : std::abs(x + a);
    // sqrt(ip) = i kappa, so i e^{i d sqrt(ip)}/sqrt(ip) = e^{-d kappa}/kappa
    return std::exp(-d * kappa) / kappa;
}

}  // namespace dd
