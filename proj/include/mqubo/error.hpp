#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mqubo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Length or shape mismatch between a matrix, vector, or weight list.
class DimensionError : public Error {
public:
    DimensionError(const std::string& what, std::size_t expected, std::size_t actual)
        : Error(what + ": expected " + std::to_string(expected) + ", got " + std::to_string(actual)),
          expected_(expected),
          actual_(actual) {}

    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

// A value or structure breaks a documented invariant (non-finite entry,
// non-positive weight, invalid configuration, ...).
class InvariantError : public Error {
public:
    using Error::Error;
};

// An objective cannot be rescaled because its spread (variance or bound
// width) is zero.
class DegenerateObjectiveError : public InvariantError {
public:
    DegenerateObjectiveError(std::size_t index, const std::string& reason)
        : InvariantError("objective " + std::to_string(index) + ": " + reason), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Malformed input file. Line and column are 1-based; 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                     : what),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace mqubo
