#pragma once

#include <stdexcept>
#include <string>

namespace skln {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (k out of range, non-unit vector, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the domain of a map (radius outside the annulus, eta > 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its evaluation budget before reaching the tolerance.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

/// The requested construction does not apply to the regime of the data.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Boundary data sits on the classification frontier with p_a == p_b, which cannot happen.
class InconsistentDataError : public Error {
public:
    using Error::Error;
};

/// Geometric bracket expansion ran past its limit without a sign change.
class UnboundedBracketError : public Error {
public:
    using Error::Error;
};

/// An internal invariant failed (non-monotone inversion, malformed profile, ...).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Too few samples inside a fitting window.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// The profile has no singular anchor, so no sharpness witness exists.
class NoWitnessError : public Error {
public:
    using Error::Error;
};

}  // namespace skln
