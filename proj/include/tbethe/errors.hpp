#pragma once

#include <stdexcept>
#include <string>

namespace tbethe {

/// Invalid model parameters or arguments (maps to CLI exit code 1).
class SpecError : public std::invalid_argument {
public:
    explicit SpecError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Numerical failure: non-convergence, precision exhaustion, inconsistent
/// linear system (maps to CLI exit code 2).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Evaluation at (or too close to) a pole of the expression.
class PoleError : public NumericError {
public:
    explicit PoleError(const std::string& msg) : NumericError(msg) {}
};

/// Requested model family / spin combination is not supported.
class UnsupportedModelError : public SpecError {
public:
    explicit UnsupportedModelError(const std::string& msg) : SpecError(msg) {}
};

} // namespace tbethe
