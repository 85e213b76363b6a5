#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcemu {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched qubit counts or matrix dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Qubit index outside the register, or clashing indices within one gate.
class IndexError : public Error {
public:
    using Error::Error;
};

/// An input violates an operation's documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A state vector or dense matrix could not be allocated.
class AllocationError : public Error {
public:
    using Error::Error;
};

/// Iterative numerical routine did not converge within its cap.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace qcemu
