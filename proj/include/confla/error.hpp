#pragma once

#include <stdexcept>
#include <string>

namespace confla {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (files, option specs, arguments).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Input is well-formed but an operation's precondition does not hold
/// (e.g. an exhaustive analysis on an incomplete landscape).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace confla
