// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace dd {

// Invalid user input: bad sequence spec, out-of-range parameter, malformed list.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: quadrature budget exhausted, singular Jacobian, divergent setup.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Requested working precision cannot support the requested check.
struct PrecisionError : NumericalError {
    explicit PrecisionError(const std::string& what) : NumericalError(what) {}
};

} // namespace dd
