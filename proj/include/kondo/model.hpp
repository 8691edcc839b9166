#pragma once

// Physical inputs of one Kondo system, kept dimensionless throughout:
// lengths in units of 1/k_F, energies in units of E_F.

#include <string_view>

namespace kondo {

/// Upper limit of the t-integrals defining f_N and y.
enum class CutoffMode {
  /// Lambda = D/E_B, the limit obtained from t = eps/E_B over the shell 0 < eps <= D.
  Derived,
  /// Lambda = D/E_F, kept for comparison with the derived limit.
  Literal,
};

std::string_view to_string(CutoffMode mode) noexcept;

/// Accepts "derived" and "paper-literal" (the CLI spelling); throws InvalidArgument otherwise.
CutoffMode parse_cutoff_mode(std::string_view text);

class ModelParams {
 public:
  /// E_B/E_F = k_B T_K / E_F.
  double eb_ratio() const noexcept { return eb_ratio_; }
  /// D/E_F, half-bandwidth over Fermi energy.
  double d_ratio() const noexcept { return d_ratio_; }
  CutoffMode cutoff_mode() const noexcept { return mode_; }

  /// Upper integration limit Lambda for the selected cutoff mode.
  double cutoff() const noexcept;

  /// True when E_B < D < E_F. Outside this range every formula is still
  /// evaluated; the flag is informational.
  bool in_physical_regime() const noexcept;

  friend ModelParams make_params(double eb_ratio, double d_ratio, CutoffMode mode);

 private:
  ModelParams(double eb, double d, CutoffMode mode) : eb_ratio_(eb), d_ratio_(d), mode_(mode) {}

  double eb_ratio_;
  double d_ratio_;
  CutoffMode mode_;
};

/// Validates both ratios (finite, strictly positive). Throws InvalidArgument
/// naming the offending field.
ModelParams make_params(double eb_ratio, double d_ratio, CutoffMode mode = CutoffMode::Derived);

struct DerivedScales {
  double xi_k;      ///< Kondo screening length times k_F, 2/eb_ratio
  double lambda_f;  ///< Fermi wavelength times k_F, 2 pi
  double cutoff;    ///< Lambda
};

DerivedScales derive_scales(const ModelParams& params) noexcept;

/// E_B/E_F = (D/E_F) exp(2 / (3 J N(0))) for antiferromagnetic coupling J N(0) < 0.
double kondo_binding_energy(double j_n0, double d_ratio);

/// Distance from the impurity in units of 1/k_F; finite and non-negative.
class RadialPoint {
 public:
  explicit RadialPoint(double x);
  double value() const noexcept { return x_; }

 private:
  double x_;
};

}  // namespace kondo
