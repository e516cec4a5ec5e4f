#pragma once

#include <stdexcept>
#include <string>

namespace kmu {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iterative method (series, quadrature, fit) did not reach its tolerance.
/// Carries the best available estimate and an error bound for it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double error_bound)
      : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

/// Result not representable even in log space.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Nonlinear least-squares failure.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, std::string diagnostics)
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace kmu
