#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// bad parameters, inadmissible g0, window outside data
struct DomainError : Error {
    using Error::Error;
};

struct PoleError : Error {
    std::complex<double> residue;
    PoleError(const std::string& what, std::complex<double> res) : Error(what), residue(res) {}
};

struct BranchPointError : Error {
    using Error::Error;
};

// on a cut with side = principal
struct BranchAmbiguityError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    double last_residual;
    ConvergenceError(const std::string& what, double res) : Error(what), last_residual(res) {}
};

struct RefinementError : Error {
    double observed_order;
    RefinementError(const std::string& what, double order) : Error(what), observed_order(order) {}
};

struct StabilityError : Error {
    using Error::Error;
};

}  // namespace dd
