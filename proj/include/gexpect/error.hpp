#pragma once

#include <stdexcept>
#include <string>

namespace gexpect {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (matrix vs. uncertainty set, arity vs. spec).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value violates a type invariant or an operation precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Requested time step exceeds the monotonicity bound of the explicit scheme.
class CflError : public Error {
public:
    using Error::Error;
};

/// Evaluation point or data lies outside the computational domain, or the
/// initial data is not finite on the grid.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Uncertainty set cannot be handled by any available solver.
class InadmissibleError : public Error {
public:
    using Error::Error;
};

} // namespace gexpect
