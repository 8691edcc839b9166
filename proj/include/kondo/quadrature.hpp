#pragma once

// Adaptive Gauss-Kronrod (10/21-point) integration on finite intervals.

#include <cstddef>
#include <functional>

namespace kondo {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_evaluations = 1'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  /// Refinement stopped because every remaining subinterval sat at its
  /// floating-point floor; error_estimate is then that floor, which may
  /// exceed the requested tolerance for heavily cancelling integrands.
  bool roundoff_limited = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive bisection starting from [a, b]. Converged when the
/// summed error estimate is below max(abs_tol, rel_tol * |value|).
/// Throws BudgetExceeded when max_evaluations would be exceeded, and
/// NumericalError if f returns a non-finite value.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options = {});

/// Same contract as integrate, but [a, b] is first cut into panels no wider
/// than half a period of an oscillation with wavenumber `wavenumber_hint`
/// (panel width pi / hint). Use the largest local wavenumber of the integrand.
QuadratureResult integrate_oscillatory(const Integrand& f, double a, double b, double wavenumber_hint,
                                       const QuadratureOptions& options = {});

}  // namespace kondo
