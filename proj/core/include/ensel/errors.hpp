#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ensel {

// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured size cap (2^k tables, C(M,k) subsets).
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Should be unreachable; signals a broken internal invariant.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
    EmptyFile,
    BadHeader,
    MalformedRow,
    InvalidValue,
    DuplicateModelName,
    Io,
};

const char* to_string(ParseErrorKind kind);

// Dataset CSV could not be read. Line numbers are 1-based; 0 means "not tied to a line".
class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail);

    ParseErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

}  // namespace ensel
