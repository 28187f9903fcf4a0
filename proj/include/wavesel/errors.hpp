#pragma once

#include <stdexcept>
#include <string>

namespace wavesel {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument is outside the domain an operation is defined on.
struct DomainError : Error {
    using Error::Error;
};

/// A configuration value or combination of values is invalid.
struct ConfigError : Error {
    using Error::Error;
};

/// File content does not match the expected schema or grammar.
struct ParseError : Error {
    using Error::Error;
};

/// Filesystem operation failed.
struct IoError : Error {
    using Error::Error;
};

/// Guard bands exhaust the available bandwidth for a candidate class.
struct InfeasiblePlanError : Error {
    using Error::Error;
};

/// Class balancing cannot proceed (a class has no samples).
struct BalanceError : Error {
    using Error::Error;
};

/// A model cannot be fitted on the given training data.
struct FitError : Error {
    using Error::Error;
};

/// Training produced a non-finite loss.
struct DivergenceError : Error {
    using Error::Error;
};

/// A persisted model or scaler cannot be restored.
struct LoadError : Error {
    using Error::Error;
};

}  // namespace wavesel
