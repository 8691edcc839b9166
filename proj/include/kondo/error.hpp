#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kondo {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A computation could not reach its accuracy or stay within its resources.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of its evaluation budget. Carries the best
/// estimate reached so the caller can decide what to do with it.
class BudgetExceeded : public NumericalError {
 public:
  BudgetExceeded(const std::string& what, double best_estimate, double error_estimate,
                 std::size_t evaluations)
      : NumericalError(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate),
        evaluations_(evaluations) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  double best_estimate_;
  double error_estimate_;
  std::size_t evaluations_;
};

}  // namespace kondo
