#pragma once

#include <stdexcept>
#include <string>

namespace beliefcoop {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate a model assumption or an operation precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Evaluation outside the region where a quantity is defined (e.g. hazard at the top of the support).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The caller asked for a quantity in the wrong equilibrium regime.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// An iterative solver ran out of iterations or lost its bracket.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}

    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

/// A structural property guaranteed by the theory failed numerically.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

}  // namespace beliefcoop
