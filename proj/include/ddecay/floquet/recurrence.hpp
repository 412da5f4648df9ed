#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "ddecay/branchcore.hpp"
#include "ddecay/types.hpp"

namespace dd {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;

// One harmonic placed exactly on a cut, at distance s from its branch point. With offset set, the
// harmonic sits at branch point + offset instead (off the cut), and its root is built from the offset
// itself so points very close to the branch point keep full relative accuracy.
struct CutEval {
    int n_star = 0;
    double s = 0.0;
    Side side = Side::above;
    std::optional<cplx> offset{};
};

// Laplace-space recurrence y_n = s_n + B_n (y_{n-1} - y_{n+1}), n_min <= n <= n_max,
// with B_n = -(i r/2) M_n and M_n the kernel matrix at p0 + i omega n.
// For two wells M_n = [[k+, -k-], [k-, -k+]]; for U1 only the (0,0) entry -k+ is live.
struct FloquetSystem {
    ModelConfig config;
    Wells wells;
    cplx p0{};
    int n_min = 0, n_max = 0;
    std::vector<Mat2> blocks;
    std::vector<Vec2> sources;

    const Mat2& block(int n) const { return blocks[static_cast<std::size_t>(n - n_min)]; }
    const Vec2& source(int n) const { return sources[static_cast<std::size_t>(n - n_min)]; }
};

// kernel matrix M(p0 + i omega n); the root is taken from spec, or from cut for its harmonic
Mat2 kernel_matrix(const ModelConfig& cfg, const Wells& w, cplx p0, int n, const BranchSpec& spec,
                   const std::optional<CutEval>& cut = std::nullopt);

// throws DomainError naming the offending n when a kernel or source is singular
FloquetSystem build_system(const ModelConfig& cfg, cplx p0, std::pair<int, int> window,
                           const BranchSpec& spec = {}, const std::optional<CutEval>& cut = std::nullopt);

struct FloquetSolution {
    int n_min = 0, n_max = 0;
    std::vector<Vec2> y;
    double residual = 0.0;   // sup norm of the recurrence residual inside the window
    double change = 0.0;     // change of the kept harmonics under the last window doubling
    int window = 0;          // half width of the truncation window that was used

    const Vec2& at(int n) const { return y[static_cast<std::size_t>(n - n_min)]; }
    Vec2 get(int n) const { return (n < n_min || n > n_max) ? Vec2::Zero() : at(n); }
};

// two-sided matrix continued fraction with zero closure outside the window
FloquetSolution solve_inhomogeneous(const FloquetSystem& sys);

// solve with window doubling (starting at +-8 beyond the harmonics requested) until the harmonics
// in [-keep, keep] change by less than tol
FloquetSolution solve_converged(const ModelConfig& cfg, cplx p0, int keep, double tol,
                                const BranchSpec& spec = {}, const std::optional<CutEval>& cut = std::nullopt);

// Harmonics of the transform Theta(p) = 1/p - H(p), H_n = H(p0 + i omega n) for |n| <= keep,
// H(p) = (r/p) sum_j c_j u_j [y_j(p - i omega) - y_j(p + i omega)].
std::vector<cplx> h_harmonics(const ModelConfig& cfg, cplx p0, const FloquetSolution& sol, int keep);

// Determinant function of the homogeneous recurrence at harmonic 0. For bound problems it is
// multiplied by p0 to cancel the pole of k- at the origin. Zeros are the Floquet poles.
cplx pole_function(const ModelConfig& cfg, cplx p0, int half_window, const BranchSpec& spec = {});

}  // namespace dd
