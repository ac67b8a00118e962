#pragma once

#include <stdexcept>
#include <string>

namespace myopia {

// Every failure raised by the core derives from Error; the C layer maps the
// concrete type onto a status code.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration (bad axis, unknown key, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A precondition of an operation was not met by the caller.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// Parameters outside the domain of a response model.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An observation with zero total evidence under the current prior.
class ImpossibleObservation : public Error {
public:
    using Error::Error;
};

/// The requested computation exceeds a configured size limit.
class ResourceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace myopia
