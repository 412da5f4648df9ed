#include "ddecay/parallel.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dd {

namespace {

cplx synth_one(const SynthesisInput& in, double t) {
    const std::size_t nodes = in.y.size();
    if (nodes == 0) return 0.0;
    const long N = static_cast<long>(in.h[0].size() / 2);
    const cplx z = std::polar(1.0, in.omega * t);
    const cplx zinvN = std::polar(1.0, -in.omega * t * static_cast<double>(N));
    cplx total = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        const auto& h = in.h[k];
        cplx acc = 0.0;
        for (long m = static_cast<long>(h.size()) - 1; m >= 0; --m) acc = acc * z + h[static_cast<std::size_t>(m)];
        total += in.w[k] * std::polar(1.0, in.y[k] * t) * acc;
    }
    return total * zinvN;
}

inline void history_row(const std::vector<cplx>& kern, const std::vector<cplx>& phi, std::size_t j_lo,
                        std::size_t j_hi, std::size_t i, cplx& out) {
    double re = 0.0, im = 0.0;
    const cplx* k = kern.data() + i;
    for (std::size_t j = j_lo; j < j_hi; ++j) {
        const cplx a = k[-static_cast<std::ptrdiff_t>(j)], b = phi[j];
        re += a.real() * b.real() - a.imag() * b.imag();
        im += a.real() * b.imag() + a.imag() * b.real();
    }
    out += cplx(re, im);
}

}  // namespace

std::vector<cplx> synthesize_serial(const SynthesisInput& in, const std::vector<double>& t) {
    std::vector<cplx> out(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) out[j] = synth_one(in, t[j]);
    return out;
}

std::vector<cplx> synthesize_parallel(const SynthesisInput& in, const std::vector<double>& t) {
    std::vector<cplx> out(t.size());
    const long n = static_cast<long>(t.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (long j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = synth_one(in, t[static_cast<std::size_t>(j)]);
    return out;
}

void history_serial(const std::vector<cplx>& kern, const std::vector<cplx>& phi, std::size_t j_lo, std::size_t j_hi,
                    std::size_t first, std::size_t last, std::vector<cplx>& out) {
    for (std::size_t i = first; i < last; ++i) history_row(kern, phi, j_lo, j_hi, i, out[i - first]);
}

void history_parallel(const std::vector<cplx>& kern, const std::vector<cplx>& phi, std::size_t j_lo,
                      std::size_t j_hi, std::size_t first, std::size_t last, std::vector<cplx>& out) {
    const long a = static_cast<long>(first), b = static_cast<long>(last);
#pragma omp parallel for schedule(static)
    for (long i = a; i < b; ++i)
        history_row(kern, phi, j_lo, j_hi, static_cast<std::size_t>(i), out[static_cast<std::size_t>(i) - first]);
}

int worker_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace dd
