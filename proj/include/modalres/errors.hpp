#pragma once

#include <stdexcept>
#include <string>

namespace modalres {

// Every error carries the name of the operation that raised it so the CLI can
// report which stage failed.
class Error : public std::runtime_error {
public:
    Error(std::string where, const std::string& what)
        : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// Raised when a result contradicts a structural fact that must hold
/// (e.g. a singular resolvent on the imaginary axis with positive damping).
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

/// a == b where a witness construction needs a != b.
class DegenerateParameters : public Error {
public:
    using Error::Error;
};

}  // namespace modalres
