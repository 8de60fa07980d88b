#pragma once

#include <stdexcept>
#include <string>

namespace qfock {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (bad grid, bad JSON, d > m, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A kernel that breaks symmetry or the sup-norm < 1 requirement.
class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Enumeration or dense-allocation guardrail exceeded.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// Index or level outside the truncated space.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Operand dimensions disagree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A Gram operator turned out numerically singular.
class PositivityError : public Error {
public:
    using Error::Error;
};

/// A computation dropped mass above the truncation level.
class TruncationError : public Error {
public:
    using Error::Error;
};

} // namespace qfock
