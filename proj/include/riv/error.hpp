#pragma once

#include <stdexcept>
#include <string>

namespace riv {

/// Malformed arguments or data handed to a library operation.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but statistically degenerate (e.g. a zero-variance column).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Least-squares design matrix is rank deficient.
class DegenerateFit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace riv
