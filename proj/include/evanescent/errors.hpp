#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evanescent {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented invariant. Carries every violation found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations)
      : Error(join(violations)), violations_(std::move(violations)) {}
  explicit ValidationError(const std::string& violation)
      : ValidationError(std::vector<std::string>{violation}) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative method exhausted its iteration budget.
class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NearDefectiveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A quantity would leave the representable floating-point range.
class RangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularConfigurationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace evanescent
