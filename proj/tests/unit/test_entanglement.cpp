#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "kondo/entanglement.hpp"
#include "kondo/error.hpp"

using namespace kondo;

namespace {

Matrix4c product_state(const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
  Eigen::Vector4cd v;
  v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  v.normalize();
  return v * v.adjoint();
}

Matrix4c as_matrix4(const Eigen::MatrixXcd& m) { return m; }

}  // namespace

TEST_CASE("von Neumann entropy in bits") {
  CHECK(von_neumann_entropy(impurity_rho()) == 1.0);
  CHECK(von_neumann_entropy(Matrix4c(Matrix4c::Identity() / 4.0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(von_neumann_entropy(singlet_projector()) <= 1e-14);

  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  CHECK(von_neumann_entropy(d) == doctest::Approx(0.81127812445913286).epsilon(1e-14));

  CHECK_THROWS_AS(von_neumann_entropy(Eigen::MatrixXcd::Identity(2, 2)), NumericalError);
  CHECK_THROWS_AS(von_neumann_entropy(Eigen::MatrixXcd::Identity(2, 3)), InvalidArgument);
  Eigen::Matrix2cd negative = Eigen::Matrix2cd::Zero();
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(von_neumann_entropy(negative), NumericalError);
}

TEST_CASE("entropy is basis independent and bounded") {
  testing::Engine rng(51);
  for (int n : {2, 4, 8}) {
    for (int i = 0; i < 50; ++i) {
      const Eigen::MatrixXcd rho = testing::random_state(rng, n);
      const Eigen::MatrixXcd u = testing::random_unitary(rng, n);
      Eigen::MatrixXcd rotated = u * rho * u.adjoint();
      rotated = 0.5 * (rotated + rotated.adjoint()).eval();
      const double s = von_neumann_entropy(rho);
      CHECK(std::abs(von_neumann_entropy(rotated) - s) <= 1e-9);
      CHECK(s >= 0.0);
      CHECK(s <= std::log2(n) + 1e-12);
    }
  }
}

TEST_CASE("singlet and maximally mixed state") {
  CHECK(negativity(singlet_projector()) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(concurrence(singlet_projector()) == doctest::Approx(1.0).epsilon(1e-12));
  const Matrix4c mixed = Matrix4c::Identity() / 4.0;
  CHECK(negativity(mixed) == 0.0);
  CHECK(concurrence(mixed) == 0.0);
}

TEST_CASE("Werner closed forms") {
  for (int k = 0; k <= 1000; ++k) {
    const double p = k / 1000.0;
    const Matrix4c w = testing::werner_state(p);
    CAPTURE(p);
    CHECK(std::abs(negativity(w) - std::max(0.0, (3.0 * p - 1.0) / 4.0)) <= 1e-12);
    CHECK(std::abs(concurrence(w) - std::max(0.0, (3.0 * p - 1.0) / 2.0)) <= 1e-7);
  }
  CHECK(negativity(testing::werner_state(1.0 / 3.0)) == 0.0);
  CHECK(concurrence(testing::werner_state(1.0 / 3.0)) == 0.0);
  CHECK(concurrence(testing::werner_state(2.0 / 3.0)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("product states are separable") {
  testing::Engine rng(52);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 100; ++i) {
    Eigen::Vector2cd a, b;
    a << std::complex<double>(normal(rng), normal(rng)), std::complex<double>(normal(rng), normal(rng));
    b << std::complex<double>(normal(rng), normal(rng)), std::complex<double>(normal(rng), normal(rng));
    const Matrix4c rho = product_state(a, b);
    CHECK(negativity(rho) == 0.0);
    CHECK(concurrence(rho) <= 1e-6);
  }
}

TEST_CASE("partial transpose spectrum does not depend on the slot") {
  testing::Engine rng(53);
  for (int i = 0; i < 200; ++i) {
    const Matrix4c rho = as_matrix4(testing::random_state(rng, 4));
    const Matrix4c first = partial_transpose(rho, Subsystem::First);
    const Matrix4c second = partial_transpose(rho, Subsystem::Second);
    // The two partial transposes are full transposes of each other.
    CHECK((first - second.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
    const Eigen::SelfAdjointEigenSolver<Matrix4c> s1(first, Eigen::EigenvaluesOnly);
    const Eigen::SelfAdjointEigenSolver<Matrix4c> s2(second, Eigen::EigenvaluesOnly);
    CHECK((s1.eigenvalues() - s2.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((partial_transpose(second) - rho).cwiseAbs().maxCoeff() == 0.0);
  }
  Matrix4c basis = Matrix4c::Zero();
  basis(1, 2) = 1.0;  // |up down><down up|
  const Matrix4c t2 = partial_transpose(basis, Subsystem::Second);
  CHECK(t2(0, 3) == 1.0);  // |up up><down down|
  const Matrix4c t1 = partial_transpose(basis, Subsystem::First);
  CHECK(t1(3, 0) == 1.0);
}

TEST_CASE("negativity and concurrence agree on random states") {
  testing::Engine rng(54);
  for (int i = 0; i < 500; ++i) {
    const Matrix4c rho = as_matrix4(testing::random_state(rng, 4));
    const double n = negativity(rho);
    const double c = concurrence(rho);
    CHECK(n >= 0.0);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    // Two-qubit bound N <= C/2; each vanishes only when the other does.
    CHECK(n <= 0.5 * c + 1e-10);
    if (n > 1e-9 || c > 1e-6) CHECK((n > 0.0) == (c > 0.0));
    const Matrix4c u = as_matrix4(testing::random_unitary(rng, 4));
    Matrix4c rotated = u * rho * u.adjoint();
    rotated = 0.5 * (rotated + rotated.adjoint()).eval();
    CHECK(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) <= 1e-9);
  }
}

TEST_CASE("local unitaries leave the measures unchanged") {
  testing::Engine rng(55);
  for (int i = 0; i < 100; ++i) {
    const Matrix4c rho = as_matrix4(testing::random_state(rng, 4));
    const Eigen::MatrixXcd a = testing::random_unitary(rng, 2);
    const Eigen::MatrixXcd b = testing::random_unitary(rng, 2);
    Matrix4c local;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) local(r, c) = a(r / 2, c / 2) * b(r % 2, c % 2);
    Matrix4c rotated = local * rho * local.adjoint();
    rotated = 0.5 * (rotated + rotated.adjoint()).eval();
    CHECK(std::abs(negativity(rotated) - negativity(rho)) <= 1e-10);
    CHECK(std::abs(concurrence(rotated) - concurrence(rho)) <= 1e-7);
  }
}

TEST_CASE("assess") {
  const auto below = assess(testing::werner_state(0.2));
  CHECK_FALSE(below.entangled);
  CHECK(below.concurrence == 0.0);
  CHECK(below.negativity == 0.0);
  CHECK(below.werner_p == doctest::Approx(0.2).epsilon(1e-14));
  CHECK_FALSE(below.condition_lhs.has_value());

  const auto above = assess(testing::werner_state(0.5), 1.5);
  CHECK(above.entangled);
  CHECK(above.concurrence == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(above.negativity == doctest::Approx(0.125).epsilon(1e-13));
  REQUIRE(above.condition_lhs.has_value());
  CHECK(*above.condition_lhs == 1.5);
  CHECK(above.entropy_bits > 0.0);
  CHECK(above.entropy_bits < 2.0);

  // g^2 = 0.6 free-gas state: p = 1.2 / 2.8 > 1/3.
  const double g2 = 0.6;
  const Matrix4c free = ((1.0 - g2) * Matrix4c::Identity() + 2.0 * g2 * singlet_projector()) / (4.0 - 2.0 * g2);
  const auto gas = assess(free);
  CHECK(gas.entangled);
  CHECK(gas.werner_p == doctest::Approx(1.2 / 2.8).epsilon(1e-14));

  CHECK_THROWS_AS(assess(Matrix4c::Identity()), NumericalError);
}
