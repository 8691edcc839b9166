#pragma once

// Reduced spin density matrices of the Yosida singlet.
//
// Two-spin basis order is (up-up, up-down, down-up, down-down). The first
// slot is the impurity (or conduction electron 1), the second slot the
// conduction electron at r (or electron 2).

#include <Eigen/Dense>

#include "kondo/kernels.hpp"
#include "kondo/model.hpp"

namespace kondo {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

enum class Normalization {
  UnitsOfN,        ///< impurity + conduction matrix, entries per electron density n
  UnitsOfN2Over8,  ///< conduction pair matrix, entries per n^2/8
  TraceOne,
};

const char* to_string(Normalization n) noexcept;

struct TwoSpinDensityMatrix {
  Matrix4c entries;
  Normalization normalization;
};

/// rho = (1 - p) I/4 + p |Psi-><Psi-| fit of a trace-one state.
struct WernerDecomposition {
  double p;
  double residual;  ///< max-abs deviation of rho from the reconstructed Werner state
};

struct NormalizedState {
  TwoSpinDensityMatrix rho;  ///< TraceOne
  WernerDecomposition werner;
};

/// Distances (in 1/k_F) of two conduction electrons from the impurity and
/// from each other. Construction enforces |x1 - x2| <= x_rel <= x1 + x2.
class ConductionGeometry {
 public:
  ConductionGeometry(RadialPoint x1, RadialPoint x2, RadialPoint x_rel);
  RadialPoint x1() const noexcept { return x1_; }
  RadialPoint x2() const noexcept { return x2_; }
  RadialPoint x_rel() const noexcept { return x_rel_; }

 private:
  RadialPoint x1_;
  RadialPoint x2_;
  RadialPoint x_rel_;
};

/// |Psi-><Psi-| for Psi- = (|up,down> - |down,up>)/sqrt(2).
const Matrix4c& singlet_projector() noexcept;

/// Impurity spin with the conduction electrons traced out: I/2.
Matrix2c impurity_rho() noexcept;

/// n I/4 + f |Psi-><Psi-| in units of n, from the kernel value f/n. Trace 1 + f/n.
TwoSpinDensityMatrix rho2_impurity_conduction(double f_over_n);
TwoSpinDensityMatrix rho2_impurity_conduction(RadialPoint x, const KernelEvaluator& kernels);
TwoSpinDensityMatrix rho2_impurity_conduction(RadialPoint x, const ModelParams& params);

/// Rescales to trace one and fits the Werner weight
/// p = (4/3) <Psi-|rho|Psi-> - 1/3. Throws NumericalError for a non-positive
/// trace or for eigenvalues below the PSD floor.
NormalizedState normalize_to_werner(const TwoSpinDensityMatrix& rho);

/// Free-electron-gas pair matrix in units of n^2/8:
/// (1 - g^2) I + 2 g^2 |Psi-><Psi-|, g = g(x_rel).
TwoSpinDensityMatrix rho2_free(RadialPoint x_rel) noexcept;

/// Impurity-induced correction in units of n^2/8 from kernel values:
/// (3/2) eb [[a+b,0,0,0],[0,a,b,0],[0,b,a,0],[0,0,0,a+b]] with
/// a = (f_N(x1)^2 + f_N(x2)^2)/2, b = g(x_rel) f_N(x1) f_N(x2).
/// Accepts eb_ratio = 0, where the correction vanishes identically.
TwoSpinDensityMatrix delta_rho_from_kernels(double eb_ratio, double f_n1, double f_n2, double g_rel);
TwoSpinDensityMatrix delta_rho(const ConductionGeometry& geometry, const KernelEvaluator& kernels);
TwoSpinDensityMatrix delta_rho(const ConductionGeometry& geometry, const ModelParams& params);

/// rho2_free(x_rel) + delta_rho.
TwoSpinDensityMatrix rho2_conduction_from_kernels(double eb_ratio, double f_n1, double f_n2, RadialPoint x_rel);
TwoSpinDensityMatrix rho2_conduction(const ConductionGeometry& geometry, const KernelEvaluator& kernels);
TwoSpinDensityMatrix rho2_conduction(const ConductionGeometry& geometry, const ModelParams& params);

/// <sigma^z sigma^z> as rho_{uu;uu} + rho_{dd;dd} - rho_{ud;ud} - rho_{du;du},
/// where the rho_{ab;ab} are the element values before the overall factor 1/2
/// that multiplies the impurity-conduction matrix (i.e. twice the entries).
/// For rho2_impurity_conduction this equals -2 f/n.
double spin_correlation_zz(const TwoSpinDensityMatrix& rho);

/// Max-abs distance between A and its conjugate transpose.
double hermiticity_defect(const Matrix4c& m);

/// Eigenvalue floor below which a state is rejected instead of clipped.
inline constexpr double kPsdFloor = 1e-12;

/// Throws NumericalError unless Hermitian (1e-12 relative to the largest
/// entry) with all eigenvalues >= -kPsdFloor * max(1, trace).
void check_density_matrix(const Matrix4c& m);

}  // namespace kondo
