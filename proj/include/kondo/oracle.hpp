#pragma once

// Brute-force momentum-lattice sums that check the continuum kernels.
//
// The k-grid is cell-centred, k = (i + 1/2) dk for i in [-M, M), in units of
// k_F. It is symmetric under k -> -k, so imaginary parts cancel, and no
// lattice point sits exactly on the Fermi sphere. Dispersion is
// eps/E_F = k^2 - 1; the Gamma sums run over the shell 0 < eps <= D, the
// free-gas sum over k <= k_F.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "kondo/model.hpp"

namespace kondo {

struct LatticeSpec {
  long half_extent;  ///< M
  double dk;         ///< lattice spacing over k_F
  /// Upper bound on enumerated lattice points per sum.
  double max_points = 2e9;
};

/// dk = 1/640 with M just covering the shell for `params`.
LatticeSpec default_lattice_spec(const ModelParams& params);

/// Smallest M whose grid covers |k| <= sqrt(1 + d_ratio) at spacing dk.
LatticeSpec lattice_spec_for(double dk, const ModelParams& params);

/// Checks M >= 1, dk > 0, and that the Fermi sphere holds at least 10 points.
void validate(const LatticeSpec& spec);

struct LatticeValue {
  double real;
  double imag;
  std::size_t points;
};

/// f_N(x) = f~(x)/N(0) with f~ = (1/V) sum_{k>k_F} Gamma_k e^{ik.r},
/// r along the z axis: (dk^3 / 2pi) sum cos(k_z x) / (k^2 - 1 + eb).
LatticeValue lattice_f_n(RadialPoint x, const ModelParams& params, const LatticeSpec& spec);

/// Same sum with r along an arbitrary (normalised internally) direction.
/// Enumerates every shell point for each call.
LatticeValue lattice_f_n_along(RadialPoint x, const std::array<double, 3>& direction, const ModelParams& params,
                               const LatticeSpec& spec);

/// f_N at every x along z from a single pass over the shell.
std::vector<double> lattice_f_n_profile(std::span<const double> xs, const ModelParams& params,
                                        const LatticeSpec& spec);

/// g(x) = (2/N) sum_{k<=k_F} e^{ik.r} with N/2 lattice points in the sphere.
LatticeValue lattice_g(RadialPoint x, const LatticeSpec& spec);

/// Normalization sum_{k>k_F} Gamma_k^2 as the dimensionless N E_B / (V N(0)),
/// i.e. (eb dk^3 / 2pi) sum 1/(k^2 - 1 + eb)^2; converges to y in Derived mode.
double lattice_norm(const ModelParams& params, const LatticeSpec& spec);

}  // namespace kondo
