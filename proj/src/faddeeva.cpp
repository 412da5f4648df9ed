#include "ddecay/faddeeva.hpp"

#include <array>
#include <cmath>

namespace dd {

namespace {

constexpr int kTerms = 40;

struct Coefficients {
    std::array<double, kTerms> a{};  // a[n-1] multiplies Z^{n-1}
    double L = 0.0;

    Coefficients() {
        const int M = 2 * kTerms;
        L = std::sqrt(kTerms / std::sqrt(2.0));
        for (int n = 1; n <= kTerms; ++n) {
            double s = 0.0;
            for (int k = -M + 1; k <= M - 1; ++k) {
                const double th = k * PI / M;
                const double t = L * std::tan(0.5 * th);
                s += std::exp(-t * t) * (L * L + t * t) * std::cos(PI * n * k / M);
            }
            a[n - 1] = s / (2.0 * M);
        }
    }
};

const Coefficients& coefficients() {
    static const Coefficients c;
    return c;
}

cplx upper(cplx z) {
    const auto& c = coefficients();
    const cplx den = c.L - I * z;
    const cplx Z = (c.L + I * z) / den;
    cplx p = 0.0;
    for (int n = kTerms - 1; n >= 0; --n) p = p * Z + c.a[n];
    return 2.0 * p / (den * den) + (1.0 / std::sqrt(PI)) / den;
}

}  // namespace

cplx faddeeva_w(cplx z) {
    if (z.imag() >= 0.0) return upper(z);
    return 2.0 * std::exp(-z * z) - upper(-z);
}

}  // namespace dd
