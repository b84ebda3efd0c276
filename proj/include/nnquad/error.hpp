#pragma once

#include <stdexcept>
#include <string>

namespace nnquad {

// Bad arguments: dimension mismatch, out-of-range parameter, violated precondition.
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed external data (DIMACS, serialized networks, direction-number files).
struct ParseError : std::runtime_error {
    ParseError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what), location(where) {}
    std::string location;
};

// A requested computation exceeds its configured budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative method did not reach its tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operation not defined for the given network class (e.g. tanh depth padding).
struct UnsupportedError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace nnquad
