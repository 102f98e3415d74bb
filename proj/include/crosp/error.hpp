#pragma once

#include <stdexcept>
#include <string>

namespace crosp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A stated precondition of a closed-form identity does not hold.
class PreconditionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Operation is not available for the requested space (OP² sampling, bad catalog entry).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Caller misuse: mismatched spaces, malformed input files.
class UsageError : public Error {
public:
    using Error::Error;
};

/// A series or iteration failed to reach its target before the hard cap.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Two independent evaluation routes disagree beyond tolerance.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

} // namespace crosp
