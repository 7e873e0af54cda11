#pragma once

#include <stdexcept>
#include <string>

namespace hyper {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Adaptive quadrature or extrapolation ran out of budget.
class NonConvergence : public NumericError {
 public:
  NonConvergence(const std::string& what, double estimate = 0.0, double error = 0.0)
      : NumericError(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

class StripViolation : public NumericError {
 public:
  using NumericError::NumericError;
};

class SpectrumOutsideStrip : public NumericError {
 public:
  using NumericError::NumericError;
};

class OverflowRisk : public NumericError {
 public:
  using NumericError::NumericError;
};

class SingularStart : public NumericError {
 public:
  using NumericError::NumericError;
};

class StepFailure : public NumericError {
 public:
  using NumericError::NumericError;
};

class NormalizationUnset : public NumericError {
 public:
  using NumericError::NumericError;
};

class UnknownInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hyper
