#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bislant {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression source. `offset()` is the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An argument left the domain of a function (log of a non-positive value,
/// division by zero, ...). The message names the offending subexpression.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A point violates a chart's domain guard.
class GuardViolation : public DomainError {
public:
    using DomainError::DomainError;
};

/// Linear dependence where independence was required.
class RankError : public Error {
public:
    RankError(const std::string& message, std::size_t index)
        : Error(message), index_(index) {}
    /// One-based index of the vector that failed.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Iterative method failed or input violated a numerical precondition.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A slant angle too close to 0 or pi/2 for a csc/sec normalization.
class DegeneracyError : public Error {
public:
    using Error::Error;
};

/// Scenario file does not match the documented schema. `field()` is a JSON path.
class SchemaError : public Error {
public:
    SchemaError(const std::string& field, const std::string& message)
        : Error(field + ": " + message), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace bislant
