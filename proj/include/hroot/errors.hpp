#pragma once

#include <stdexcept>
#include <string>

namespace hroot {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (schema, Hermitian H, singular H, ...).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A rank or clustering decision could not be made reliably at the requested
/// tolerance.
class IllConditioned : public Error {
public:
    using Error::Error;
};

}  // namespace hroot
