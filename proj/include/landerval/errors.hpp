#pragma once

#include <stdexcept>
#include <string>

namespace landerval {

// Invalid or inconsistent configuration (bad ranges, thresholds, weights).
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime (non-convergence, degenerate inputs).
// The CLI maps this, like any other runtime error, to exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace landerval
