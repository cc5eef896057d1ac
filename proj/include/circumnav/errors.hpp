#pragma once

#include <stdexcept>
#include <string>

namespace circumnav {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two points closer than the configured minimum separation; a bearing
/// between them is undefined. Carries the offending context in the message.
struct DegenerateBearing : Error {
    using Error::Error;
};

/// Matrix handed to a balanced-digraph routine has nonzero column sums.
struct NotBalanced : Error {
    using Error::Error;
};

/// Tangential bias too small: the positive-rotation margin is not positive.
struct AlphaTooSmall : Error {
    using Error::Error;
};

/// NaN/Inf appeared in the integrated state (usually dt too large).
struct NonFiniteState : Error {
    using Error::Error;
};

/// Vector expected to lie on the zero-sum consensus subspace does not.
struct SumNotZero : Error {
    using Error::Error;
};

/// Operation requires a specific gain value (unit radial gain).
struct WrongGain : Error {
    using Error::Error;
};

/// Invalid scenario/sweep configuration or file contents.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace circumnav
