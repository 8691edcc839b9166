#pragma once

// Scalar screening-cloud kernels of the Yosida ground state.
//
// Units: x = k_F r; f_N = f~/N(0) is dimensionless; f is reported per
// electron density n (f_over_n); the zz spin correlation likewise per n.

#include <span>
#include <vector>

#include "kondo/model.hpp"
#include "kondo/quadrature.hpp"

namespace kondo {

/// Below this x the 1/x prefactor of f_N is replaced by its Taylor expansion.
inline constexpr double kSmallXSwitch = 1e-4;

/// Phase accumulation x*sqrt(1 + Lambda*eb) above which f_N switches to
/// half-period pre-partitioned quadrature.
inline constexpr double kOscillatoryPhaseThreshold = 10.0;

/// All kernels at one radial point, sharing a single f_N evaluation.
struct KernelSample {
  double x;
  double f_n;
  double f_over_n;
  double p;
  double corr_zz;
  double cond_lhs;
  double g;
};

struct KernelProfile {
  std::vector<double> xs;
  std::vector<double> f_n;
  std::vector<double> f_over_n;
  std::vector<double> p;
  std::vector<double> corr_zz;
  std::vector<double> cond_lhs;
  std::vector<double> g;
};

/// Evaluates the kernels for one parameter set. The x-independent integrals
/// (f_N(0), y and the x^2 Taylor coefficient) are computed once on
/// construction; the object is immutable afterwards and safe to share.
class KernelEvaluator {
 public:
  explicit KernelEvaluator(const ModelParams& params, const QuadratureOptions& options = {});

  const ModelParams& params() const noexcept { return params_; }
  const QuadratureOptions& options() const noexcept { return options_; }

  /// f_N(x) = (1/x) int_0^Lambda sin(x sqrt(1 + t eb)) / (1 + t) dt.
  double f_n(RadialPoint x) const;
  /// f_N(0) = int_0^Lambda sqrt(1 + t eb) / (1 + t) dt.
  double f_n_origin() const noexcept { return f_n_origin_; }
  /// y = int_0^Lambda sqrt(1 + t eb) / (1 + t)^2 dt.
  double y() const noexcept { return y_; }

  double f_over_n(RadialPoint x) const;
  double condition_lhs(RadialPoint x) const;
  double werner_p(RadialPoint x) const;
  double corr_zz(RadialPoint x) const;

  KernelSample sample(RadialPoint x) const;

 private:
  ModelParams params_;
  QuadratureOptions options_;
  double f_n_origin_;
  double y_;
  double taylor_x2_;  // int_0^Lambda (1 + t eb)^{3/2} / (1 + t) dt
};

/// Evaluates `sample` on every x (concurrently when hardware allows); output
/// is in input order. Requires xs strictly increasing.
KernelProfile kernel_profile(const KernelEvaluator& kernels, std::span<const double> xs);

// Point-wise conveniences; each builds a fresh evaluator.
double f_n(RadialPoint x, const ModelParams& params);
double y_integral(const ModelParams& params);
double f_over_n(RadialPoint x, const ModelParams& params);
double condition_lhs(RadialPoint x, const ModelParams& params);
double werner_p(RadialPoint x, const ModelParams& params);
double corr_zz(RadialPoint x, const ModelParams& params);

/// Free-electron exchange hole g(x) = 3 (sin x - x cos x) / x^3, g(0) = 1.
double g_fn(RadialPoint x) noexcept;

// Algebra shared by the evaluator and by callers holding kernel values.
/// f/n = (3/4) eb f_N^2 / y.
double f_over_n_from(double f_n, double eb_ratio, double y) noexcept;
/// p = (f/n) / (1 + f/n).
double werner_weight(double f_over_n) noexcept;

}  // namespace kondo
