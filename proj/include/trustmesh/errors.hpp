#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace trustmesh {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stream or file does not follow its documented layout (missing header,
/// wrong log kind, unreadable input).
class FormatError : public Error {
public:
    using Error::Error;
};

/// A record violates one of its stated invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A configuration value is out of range, or an unknown key was found.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Persistent state could not be read or written; message carries position
/// information when available.
class StorageError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its contract (identifier mismatch,
/// unknown lookup key, record outside its window).
class ContractError : public Error {
public:
    using Error::Error;
};

/// One malformed line in an otherwise parseable stream. Parsers collect
/// these instead of aborting.
struct LineError {
    std::size_t line = 0;  // 1-based
    std::string message;

    bool operator==(const LineError&) const = default;
};

std::string format_line_errors(const std::vector<LineError>& errors);

}  // namespace trustmesh
