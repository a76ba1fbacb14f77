#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wpdi {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Eigenvalue triple whose trace is too far from zero to repair.
struct TraceError : Error {
    using Error::Error;
};

/// Point lies outside the admissible region (x^3 >= 54 y^2 and friends).
struct RegionError : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

/// log/sqrt of a negative value.
struct DomainError : Error {
    using Error::Error;
};

/// Malformed expression text. `offset` is the byte position of the problem.
struct SyntaxError : Error {
    SyntaxError(const std::string& what, std::size_t offset_)
        : Error(what + " (offset " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

/// Variable not allowed in the current parse mode.
struct ModeError : Error {
    ModeError(const std::string& what, std::size_t offset_)
        : Error(what + " (offset " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

/// '^' right operand does not fold to a finite constant.
struct ExponentError : Error {
    ExponentError(const std::string& what, std::size_t offset_)
        : Error(what + " (offset " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

/// Gram matrix fails the positive-semidefinite check.
struct GramError : Error {
    using Error::Error;
};

/// A global proportionality constant failed to fit all samples.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Exhausted the scan budget without finding an admissible k.
struct NoSolution : Error {
    using Error::Error;
};

struct ConstraintViolation : Error {
    using Error::Error;
};

struct MonotonicityFailure : Error {
    using Error::Error;
};

struct SlackViolation : Error {
    using Error::Error;
};

/// Equality ODE denominator vanished; carries the numerator at the point.
struct SingularPoint : Error {
    SingularPoint(const std::string& what, double numerator_)
        : Error(what), numerator(numerator_) {}
    double numerator;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace wpdi
