#pragma once

#include <stdexcept>
#include <string>

namespace excursion {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A distribution failed a structural check (normalization, aperiodicity, drift sign, ...).
struct ValidationError : Error {
    using Error::Error;
};

// phi(t) = 1 has no positive root (non-negative drift or no positive offset).
struct NoRootError : Error {
    using Error::Error;
};

// A dynamic-programming table cannot honour its truncation budget at the given caps.
struct CapsError : Error {
    using Error::Error;
};

// Covariance matrix is not positive definite.
struct SingularCovarianceError : Error {
    using Error::Error;
};

// Conditioning event has zero probability.
struct ZeroConditioningError : Error {
    using Error::Error;
};

// Series truncation tail bound exceeds its tolerance.
struct TruncationError : Error {
    using Error::Error;
};

// Importance-sampling horizon window leaves too much mass outside.
struct WindowError : Error {
    using Error::Error;
};

// Survival-probability horizon too short for the requested bias bracket.
struct HorizonError : Error {
    using Error::Error;
};

// Rejection sampler acceptance rate below the configured floor.
struct RejectionError : Error {
    using Error::Error;
};

// A statistical acceptance gate failed.
struct StatGateError : Error {
    using Error::Error;
};

} // namespace excursion
