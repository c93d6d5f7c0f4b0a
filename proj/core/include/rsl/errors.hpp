#pragma once

#include <stdexcept>
#include <string>

namespace rsl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments or malformed input files; CLI maps this to exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

// A value left the range of the fixed-width integer representation.
struct OverflowError : Error {
    using Error::Error;
};

// A grid or padded transform would exceed the per-object entry budget.
struct MemoryBudgetError : Error {
    using Error::Error;
};

// Adaptive quadrature stopped above the requested tolerance.
struct QuadratureError : Error {
    QuadratureError(const std::string& what, double achieved)
        : Error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

// An inequality with an explicit constant failed; CLI maps this to exit code 2.
struct InequalityViolationError : Error {
    InequalityViolationError(const std::string& what, std::string witness)
        : Error(what), witness_path(std::move(witness)) {}
    std::string witness_path;
};

}  // namespace rsl
