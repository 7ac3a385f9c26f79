#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reflsm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter value (bad sign, lo > hi, unknown config key, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operands whose dimensions do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation (e.g. log of 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Result is not defined for the given input (e.g. precision with no positives).
class UndefinedResultError : public Error {
public:
    using Error::Error;
};

class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Malformed byte stream; offset is the byte position where parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace reflsm
