#pragma once

#include <stdexcept>
#include <string>

namespace pathgrad {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: unknown names, out-of-range arguments, malformed config.
struct ValidationError : Error {
    using Error::Error;
};

struct UnknownModelError : ValidationError {
    using ValidationError::ValidationError;
};

// Operation not defined for this object (e.g. pdf of a point mass).
struct UnsupportedOperationError : Error {
    using Error::Error;
};

// A weight function returned a negative or non-finite value.
struct InvalidWeightError : Error {
    using Error::Error;
};

// Non-finite values produced where finite ones are required.
struct NumericsError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace pathgrad
