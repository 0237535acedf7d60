#pragma once

#include <stdexcept>
#include <string>

namespace fuchs {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arithmetic combined scalars from different backends (or float precisions).
class BackendMismatch : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation (|z| >= 1 for a
/// series, a pole, an integer hypergeometric parameter, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition was refused (point on A_L, ordinary point where a
/// singular one is required, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative method did not reach its tolerance.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed operator file or command line value.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace fuchs
