#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace scl_lab {

/// A violated precondition on caller-supplied input.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Word/matrix/vector text that does not conform to its grammar.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidInput(what + " at position " + std::to_string(position)), position_(position) {}

  [[nodiscard]] std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A certificate failed re-verification. Always an implementation bug.
class CertificateFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A search or recursion ran out of its configured budget.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace scl_lab
