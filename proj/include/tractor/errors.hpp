#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tractor {

/// Family/rank combination or option value the library does not realize.
class UnsupportedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operand sizes do not agree with the owning algebra or chart.
class SizeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Internal consistency failure: cannot happen for data built by this library.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Polynomial/form literal that does not match the grammar. `column` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace tractor
