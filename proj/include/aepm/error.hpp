#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aepm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `position` is a byte offset for binary formats and a
/// 1-based line number for text formats.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A pipeline stage had nothing to work on (no foreground, degenerate reference, ...).
class PipelineError : public Error {
public:
    using Error::Error;
};

}  // namespace aepm
