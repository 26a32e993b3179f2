#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

// Base class for all library-specific failures.
class OrliczError : public std::runtime_error {
public:
    explicit OrliczError(const std::string& what) : std::runtime_error(what) {}
};

/// Composed map stack has nontrivial common kernel; the sum would vanish on a line.
class KernelIntersectionNonTrivial : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// Growth-ratio schedule neither bounded nor clearly diverging; widen the radii.
class InconclusiveGrowth : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// Angular refinement on the sphere did not stabilize within budget.
class SphereMinimizationFailed : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// Requested value lies outside the tabulated profile range.
class OutOfRange : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// Profile inverse needed a value beyond the tabulated r_max.
class ProfileRangeExceeded : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// Superlinearity probes could not bound the conjugate search box.
class MaximizerNotBracketed : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// Luxemburg bisection could not bracket the unit-modular level.
class BracketFailure : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// A hypothesis check was invoked without its required data.
class MissingHypothesisData : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// The ordering precondition of a hypothesis check does not hold.
class OrderingViolation : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// Time-derivative of the flux failed its smoothness cross-check.
class DifferentiationUnstable : public OrliczError {
public:
    using OrliczError::OrliczError;
};

/// A solve was requested while a hypothesis validator fails and no override
/// flag was set.
class HypothesesNotSatisfied : public OrliczError {
public:
    using OrliczError::OrliczError;
};

} // namespace orlicz
