#pragma once

#include <optional>

#include <Eigen/Dense>

#include "kondo/densmat.hpp"

namespace kondo {

/// Eigenvalue magnitudes below this are treated as zero in entropy and negativity sums.
inline constexpr double kEigenvalueFloor = 1e-12;

/// -Tr[rho log2 rho] in bits. Requires a Hermitian trace-one state
/// (|Tr - 1| <= 1e-9) that is PSD to within kPsdFloor.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

enum class Subsystem { First, Second };

/// Partial transpose of a two-qubit operator over one slot.
Matrix4c partial_transpose(const Matrix4c& rho, Subsystem over = Subsystem::Second);

/// Sum of |negative eigenvalues| of the partial transpose over the second slot.
double negativity(const Matrix4c& rho);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing square
/// roots of the eigenvalues of sqrt(rho) (sy x sy) rho* (sy x sy) sqrt(rho).
double concurrence(const Matrix4c& rho);

struct EntanglementReport {
  double entropy_bits;  ///< von Neumann entropy of the two-spin state
  double werner_p;      ///< singlet-weight fit (4/3)<Psi-|rho|Psi-> - 1/3
  double concurrence;
  double negativity;
  bool entangled;  ///< negativity > kEigenvalueFloor (PPT is exact for two qubits)
  /// Left-hand side of the Werner criterion, only when supplied by the caller.
  std::optional<double> condition_lhs;
};

EntanglementReport assess(const Matrix4c& rho, std::optional<double> condition_lhs = std::nullopt);

}  // namespace kondo
