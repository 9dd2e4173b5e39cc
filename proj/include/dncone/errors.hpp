#pragma once

#include <stdexcept>
#include <string>

namespace dncone {

// Bad input or configuration (CLI exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal numerical failure (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class DerivativeUnavailable : public InputError {
 public:
  using InputError::InputError;
};

class OrderUnsupported : public InputError {
 public:
  using InputError::InputError;
};

class ConditionViolation : public InputError {
 public:
  using InputError::InputError;
};

class SymmetryError : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : InputError(what + " (line " + std::to_string(line) + ", column " +
                   std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularShift : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ProjectionStall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class QuadratureStall : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditioned : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InconsistentBracket : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dncone
