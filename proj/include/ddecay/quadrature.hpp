#pragma once

#include <functional>
#include <vector>

#include "ddecay/types.hpp"

namespace dd {

struct QuadResult {
    cplx value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 4000;
    double max_width = 0.0;   // 0 = no cap
};

// global adaptive 7/15 Gauss-Kronrod on [a, b] (node tables from Boost.Math)
QuadResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadOptions& opt = {});

// Same, for vector-valued integrands; f(x, out) fills out (size dim). The error is the sum of the
// component errors. Accepted panels are kept so the caller can reuse nodes and samples.
struct VecQuadResult {
    std::vector<cplx> value;
    double error = 0.0;
    bool converged = false;
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<std::vector<cplx>> samples;
};
using VecIntegrand = std::function<void(double, std::vector<cplx>&)>;
VecQuadResult integrate_vec(const VecIntegrand& f, std::size_t dim, const std::vector<double>& breaks,
                            const QuadOptions& opt, bool keep_nodes);

// fixed Gauss-Legendre rules on [-1, 1]
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};
const Rule& gauss_legendre8();
const Rule& kronrod15();

}  // namespace dd
