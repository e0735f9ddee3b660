#pragma once

#include <stdexcept>
#include <string>

namespace lattice {

// Input failed validation (bad JSON schema, violated precondition on
// user-supplied data). The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures of a numerical procedure. The CLI maps these to exit
// code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TwistViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ClosednessViolation : public NumericalError {
 public:
  ClosednessViolation(const std::string& what, double residual, double x, double xp)
      : NumericalError(what), residual_(residual), x_(x), xp_(xp) {}
  double residual() const { return residual_; }
  double x() const { return x_; }
  double xp() const { return xp_; }

 private:
  double residual_;
  double x_;
  double xp_;
};

class Degenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InsufficientData : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotMorse : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonPositiveK : public NumericalError {
 public:
  NonPositiveK(const std::string& what, double k_lower)
      : NumericalError(what), k_lower_(k_lower) {}
  double k_lower() const { return k_lower_; }

 private:
  double k_lower_;
};

class CountJump : public NumericalError {
 public:
  CountJump(const std::string& what, double t, std::size_t before, std::size_t after)
      : NumericalError(what), t_(t), before_(before), after_(after) {}
  double t() const { return t_; }
  std::size_t before() const { return before_; }
  std::size_t after() const { return after_; }

 private:
  double t_;
  std::size_t before_;
  std::size_t after_;
};

class StepFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NotHyperbolic : public NumericalError {
 public:
  NotHyperbolic(const std::string& what, double lambda)
      : NumericalError(what), lambda_(lambda) {}
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

class InvarianceViolation : public NumericalError {
 public:
  InvarianceViolation(const std::string& what, double x, double y, double residual)
      : NumericalError(what), x_(x), y_(y), residual_(residual) {}
  double x() const { return x_; }
  double y() const { return y_; }
  double residual() const { return residual_; }

 private:
  double x_;
  double y_;
  double residual_;
};

}  // namespace lattice
