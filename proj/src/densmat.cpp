#include "kondo/densmat.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kondo/error.hpp"

namespace kondo {
namespace {

// Matrix with corners c, central diagonal d and central off-diagonal o.
Matrix4c block_form(double c, double d, double o) {
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = c;
  m(3, 3) = c;
  m(1, 1) = d;
  m(2, 2) = d;
  m(1, 2) = o;
  m(2, 1) = o;
  return m;
}

}  // namespace

const char* to_string(Normalization n) noexcept {
  switch (n) {
    case Normalization::UnitsOfN:
      return "n";
    case Normalization::UnitsOfN2Over8:
      return "n^2/8";
    case Normalization::TraceOne:
      return "trace-one";
  }
  return "trace-one";
}

ConductionGeometry::ConductionGeometry(RadialPoint x1, RadialPoint x2, RadialPoint x_rel)
    : x1_(x1), x2_(x2), x_rel_(x_rel) {
  const double a = x1.value();
  const double b = x2.value();
  const double r = x_rel.value();
  const double slack = 1e-12 * std::max({1.0, a, b});
  if (r < std::abs(a - b) - slack || r > a + b + slack)
    throw InvalidArgument(
        fmt::format("geometry: x_rel = {} is not realizable for x1 = {}, x2 = {} (need |x1-x2| <= x_rel <= x1+x2)", r,
                    a, b));
}

const Matrix4c& singlet_projector() noexcept {
  static const Matrix4c projector = block_form(0.0, 0.5, -0.5);
  return projector;
}

Matrix2c impurity_rho() noexcept { return Matrix2c::Identity() * 0.5; }

TwoSpinDensityMatrix rho2_impurity_conduction(double f_over_n) {
  if (!std::isfinite(f_over_n) || f_over_n < 0.0)
    throw InvalidArgument(fmt::format("f_over_n must be finite and >= 0, got {}", f_over_n));
  return {block_form(0.25, 0.25 + 0.5 * f_over_n, -0.5 * f_over_n), Normalization::UnitsOfN};
}

TwoSpinDensityMatrix rho2_impurity_conduction(RadialPoint x, const KernelEvaluator& kernels) {
  return rho2_impurity_conduction(kernels.f_over_n(x));
}

TwoSpinDensityMatrix rho2_impurity_conduction(RadialPoint x, const ModelParams& params) {
  return rho2_impurity_conduction(x, KernelEvaluator(params));
}

double hermiticity_defect(const Matrix4c& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

void check_density_matrix(const Matrix4c& m) {
  if (!m.allFinite()) throw NumericalError("density matrix has non-finite entries");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (hermiticity_defect(m) > 1e-12 * scale)
    throw NumericalError(fmt::format("density matrix is not Hermitian (defect {})", hermiticity_defect(m)));
  const Eigen::SelfAdjointEigenSolver<Matrix4c> solver(m, Eigen::EigenvaluesOnly);
  const double lowest = solver.eigenvalues().minCoeff();
  const double trace = std::abs(m.trace().real());
  if (lowest < -kPsdFloor * std::max(1.0, trace))
    throw NumericalError(fmt::format("density matrix is not positive semidefinite (eigenvalue {})", lowest));
}

NormalizedState normalize_to_werner(const TwoSpinDensityMatrix& rho) {
  const double trace = rho.entries.trace().real();
  if (!(trace > 0.0)) throw NumericalError(fmt::format("cannot normalize a state with trace {}", trace));
  check_density_matrix(rho.entries);

  const Matrix4c unit = rho.entries / trace;
  const double singlet_weight = (singlet_projector() * unit).trace().real();
  const double p = 4.0 / 3.0 * singlet_weight - 1.0 / 3.0;
  const Matrix4c werner = (1.0 - p) * Matrix4c::Identity() / 4.0 + p * singlet_projector();
  const double residual = (unit - werner).cwiseAbs().maxCoeff();
  return {{unit, Normalization::TraceOne}, {p, residual}};
}

TwoSpinDensityMatrix rho2_free(RadialPoint x_rel) noexcept {
  const double g = g_fn(x_rel);
  const double g2 = g * g;
  return {block_form(1.0 - g2, 1.0, -g2), Normalization::UnitsOfN2Over8};
}

TwoSpinDensityMatrix delta_rho_from_kernels(double eb_ratio, double f_n1, double f_n2, double g_rel) {
  if (!std::isfinite(eb_ratio) || eb_ratio < 0.0)
    throw InvalidArgument(fmt::format("eb_ratio must be finite and >= 0, got {}", eb_ratio));
  const double a = 0.5 * (f_n1 * f_n1 + f_n2 * f_n2);
  const double b = g_rel * f_n1 * f_n2;
  const double scale = 1.5 * eb_ratio;
  return {block_form(scale * (a + b), scale * a, scale * b), Normalization::UnitsOfN2Over8};
}

TwoSpinDensityMatrix delta_rho(const ConductionGeometry& geometry, const KernelEvaluator& kernels) {
  return delta_rho_from_kernels(kernels.params().eb_ratio(), kernels.f_n(geometry.x1()), kernels.f_n(geometry.x2()),
                                g_fn(geometry.x_rel()));
}

TwoSpinDensityMatrix delta_rho(const ConductionGeometry& geometry, const ModelParams& params) {
  return delta_rho(geometry, KernelEvaluator(params));
}

TwoSpinDensityMatrix rho2_conduction_from_kernels(double eb_ratio, double f_n1, double f_n2, RadialPoint x_rel) {
  TwoSpinDensityMatrix out = rho2_free(x_rel);
  out.entries += delta_rho_from_kernels(eb_ratio, f_n1, f_n2, g_fn(x_rel)).entries;
  return out;
}

TwoSpinDensityMatrix rho2_conduction(const ConductionGeometry& geometry, const KernelEvaluator& kernels) {
  return rho2_conduction_from_kernels(kernels.params().eb_ratio(), kernels.f_n(geometry.x1()),
                                      kernels.f_n(geometry.x2()), geometry.x_rel());
}

TwoSpinDensityMatrix rho2_conduction(const ConductionGeometry& geometry, const ModelParams& params) {
  return rho2_conduction(geometry, KernelEvaluator(params));
}

double spin_correlation_zz(const TwoSpinDensityMatrix& rho) {
  const auto& m = rho.entries;
  return 2.0 * (m(0, 0).real() + m(3, 3).real() - m(1, 1).real() - m(2, 2).real());
}

}  // namespace kondo
