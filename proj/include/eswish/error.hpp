// Copyright 2026 The eswish Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef ESWISH_ERROR_HPP
#define ESWISH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace eswish {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment, layer or schedule configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// API called out of order (stale cache, non-deterministic loss, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Non-finite values surfaced during optimization.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// Runs that cannot be combined element by element.
class AggregationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

enum class ParseErrorKind { WrongMagic, Truncated, CountMismatch, Malformed };

/// Malformed binary input (IDX or weight files).
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
    ParseErrorKind kind() const noexcept { return kind_; }

private:
    ParseErrorKind kind_;
};

}  // namespace eswish

#endif  // ESWISH_ERROR_HPP
