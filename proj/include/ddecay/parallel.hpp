#pragma once

#include <vector>

#include "ddecay/types.hpp"

namespace dd {

// Non-uniform Fourier synthesis used by the Bromwich inversion:
//   out[j] = sum_k w[k] e^{i y[k] t_j} sum_{n=-N..N} e^{i omega n t_j} h[k][n + N]
// Each output is accumulated in a fixed order, so the serial and OpenMP versions agree bit for bit.
struct SynthesisInput {
    std::vector<double> y;
    std::vector<double> w;
    std::vector<std::vector<cplx>> h;  // per node, 2N + 1 harmonics
    double omega = 1.0;
};
std::vector<cplx> synthesize_serial(const SynthesisInput& in, const std::vector<double>& t);
std::vector<cplx> synthesize_parallel(const SynthesisInput& in, const std::vector<double>& t);

// Block history of the Volterra march: for i in [first, last)
//   out[i - first] += sum_{j = j_lo}^{j_hi - 1} kern[i - j] * phi[j]
// (requires i - j >= 0). Each output is a fixed-order sum, so both versions agree bit for bit.
void history_serial(const std::vector<cplx>& kern, const std::vector<cplx>& phi, std::size_t j_lo,
                    std::size_t j_hi, std::size_t first, std::size_t last, std::vector<cplx>& out);
void history_parallel(const std::vector<cplx>& kern, const std::vector<cplx>& phi, std::size_t j_lo,
                      std::size_t j_hi, std::size_t first, std::size_t last, std::vector<cplx>& out);

int worker_count();

}  // namespace dd
