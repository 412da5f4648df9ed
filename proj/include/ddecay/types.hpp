#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace dd {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

enum class Potential { U1, U2, FreeTrap };

struct ModelConfig {
    Potential potential = Potential::U1;
    double a = 0.59;
    bool binding = true;
    double r = 0.0;
    double omega = 1.0;

    // throws DomainError
    void validate() const;
    static ModelConfig u1(double a, double r, double omega);
    static ModelConfig u2(double a, double r, double omega);
    static ModelConfig free_trap(double a, double r, double omega);
};

// Point interactions seen by the solvers. The potential is 2 * sum_j c_j delta(x - x_j).
// Up to two wells; unused slots have c = 0.
struct Wells {
    int count = 0;
    std::array<double, 2> x{0.0, 0.0};
    std::array<double, 2> c{0.0, 0.0};
    std::array<double, 2> u{0.0, 0.0};   // bound-state value e^{-|x_j|} (zero without binding)
};
Wells wells_of(const ModelConfig& cfg);

enum class Pipeline { laplace, volterra, oracle, asymptotic };
const char* to_string(Pipeline p);
const char* to_string(Potential p);
Potential potential_from_string(const std::string& s);

struct SurvivalTrace {
    std::vector<double> t;
    std::vector<cplx> theta;
    Pipeline pipeline = Pipeline::laplace;
    ModelConfig config;

    std::vector<double> abs2() const;
    double max_abs() const;
};

bool all_finite(const std::vector<cplx>& v);

}  // namespace dd
