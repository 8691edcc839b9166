#include "kondo/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "kondo/error.hpp"

namespace kondo {
namespace {

void require_state(const Eigen::MatrixXcd& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw InvalidArgument("density matrix must be square");
  if (!rho.allFinite()) throw NumericalError("density matrix has non-finite entries");
  const double defect = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12) throw NumericalError(fmt::format("density matrix is not Hermitian (defect {})", defect));
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-9) throw NumericalError(fmt::format("density matrix trace is {}, expected 1", trace));
}

Eigen::VectorXd state_spectrum(const Eigen::MatrixXcd& rho) {
  require_state(rho);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  Eigen::VectorXd w = solver.eigenvalues();
  if (w.minCoeff() < -kPsdFloor)
    throw NumericalError(fmt::format("density matrix is not positive semidefinite (eigenvalue {})", w.minCoeff()));
  return w;
}

}  // namespace

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  const Eigen::VectorXd w = state_spectrum(rho);
  double s = 0.0;
  for (double lambda : w)
    if (lambda > kEigenvalueFloor) s -= lambda * std::log2(lambda);
  return std::max(0.0, s);
}

Matrix4c partial_transpose(const Matrix4c& rho, Subsystem over) {
  // index = 2 * first + second
  Matrix4c out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const int row = 2 * a + b;
          const int col = 2 * c + d;
          if (over == Subsystem::Second)
            out(2 * a + d, 2 * c + b) = rho(row, col);
          else
            out(2 * c + b, 2 * a + d) = rho(row, col);
        }
  return out;
}

double negativity(const Matrix4c& rho) {
  state_spectrum(rho);
  const Eigen::SelfAdjointEigenSolver<Matrix4c> solver(partial_transpose(rho), Eigen::EigenvaluesOnly);
  double sum = 0.0;
  for (double lambda : solver.eigenvalues())
    if (lambda < -kEigenvalueFloor) sum -= lambda;
  return sum;
}

double concurrence(const Matrix4c& rho) {
  const Eigen::VectorXd w = state_spectrum(rho);
  const Eigen::SelfAdjointEigenSolver<Matrix4c> solver(rho);
  const Eigen::Vector4d clipped = w.cwiseMax(0.0).cwiseSqrt();
  const Matrix4c root = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();

  Matrix4c flip = Matrix4c::Zero();  // sigma_y (x) sigma_y
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  Matrix4c r = root * flip * rho.conjugate() * flip * root;
  r = 0.5 * (r + r.adjoint()).eval();

  const Eigen::SelfAdjointEigenSolver<Matrix4c> rsolver(r, Eigen::EigenvaluesOnly);
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(0.0, rsolver.eigenvalues()(i)));
  std::sort(l.begin(), l.end(), std::greater<>());
  const double c = l[0] - l[1] - l[2] - l[3];
  return c > kEigenvalueFloor ? std::min(1.0, c) : 0.0;
}

EntanglementReport assess(const Matrix4c& rho, std::optional<double> condition_lhs) {
  EntanglementReport r{};
  r.entropy_bits = von_neumann_entropy(rho);
  r.werner_p = 4.0 / 3.0 * (singlet_projector() * rho).trace().real() - 1.0 / 3.0;
  r.negativity = negativity(rho);
  r.concurrence = concurrence(rho);
  r.entangled = r.negativity > kEigenvalueFloor;
  r.condition_lhs = condition_lhs;
  return r;
}

}  // namespace kondo
