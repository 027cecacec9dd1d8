#pragma once

#include <stdexcept>
#include <string>

namespace hdlasso {

// Shape/size mismatches and empty inputs.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Arguments outside the documented range (levels, rho, index sets, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An iterative solver exhausted its iteration budget.
struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& what, double residual_, int iterations_)
        : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
    double residual = 0.0;
    int iterations = 0;
};

// A scale estimate collapsed below the floor where KKT conditions stop
// being well defined.
struct DegenerateScaleError : std::runtime_error {
    DegenerateScaleError(const std::string& what, int index_ = -1)
        : std::runtime_error(what), index(index_) {}
    int index = -1;  // offending node, -1 if not node-wise
};

// Linear system has no solution (basis pursuit with f0 outside the range).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV / JSON input could not be parsed; carries a 1-based line number.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, long line_)
        : std::runtime_error(what + " (line " + std::to_string(line_) + ")"), line(line_) {}
    long line = 0;
};

}  // namespace hdlasso
