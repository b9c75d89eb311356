#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epicomp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A declaration or argument violates a structural invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation needs something the system does not provide (e.g. an
/// observer without a partition).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Positions are 1-based; line is 0 when the input
/// was a single-line expression.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(format(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message + " at column " + std::to_string(column);
    return message + " at line " + std::to_string(line) + ", column " + std::to_string(column);
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace epicomp
