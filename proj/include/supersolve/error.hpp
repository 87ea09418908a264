#pragma once

#include <stdexcept>
#include <string>

namespace supersolve {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid user input (files, terms, arguments).
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

// Evaluation failures: unknown operation, arity mismatch, out-of-range values.
class EvalError : public InputError {
 public:
  using InputError::InputError;
};

// Input violates a theorem's stated hypothesis (e.g. absorbing degree above the cap).
class HypothesisViolation : public InputError {
 public:
  using InputError::InputError;
};

// A search the theory guarantees to succeed came back empty. This can only
// mean a bug in this library and must never be swallowed.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace supersolve
