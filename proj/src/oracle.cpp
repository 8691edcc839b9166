#include "kondo/oracle.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "kondo/error.hpp"
#include "kondo/parallel.hpp"

namespace kondo {
namespace {

constexpr double kDefaultDk = 1.0 / 640.0;

double coordinate(long i, double dk) { return (static_cast<double>(i) + 0.5) * dk; }

// Pairwise summation keeps reductions independent of thread count.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const auto half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

// Index range [lo, hi] of i with |coordinate(i)| <= bound, widened by one on
// each side; callers re-test every candidate with the exact predicate.
std::pair<long, long> candidate_range(double bound, double dk, long m) {
  if (bound < 0.0) return {0, -1};
  const long hi = std::min(m - 1, static_cast<long>(std::floor(bound / dk - 0.5)) + 1);
  const long lo = std::max(-m, -hi - 1);
  return {lo, hi};
}

double shell_points_estimate(const ModelParams& params, const LatticeSpec& spec) {
  const double outer = std::pow(1.0 + params.d_ratio(), 1.5);
  return 4.0 / 3.0 * std::numbers::pi * (outer - 1.0) / (spec.dk * spec.dk * spec.dk);
}

void check_shell(const ModelParams& params, const LatticeSpec& spec) {
  validate(spec);
  const double kmax = std::sqrt(1.0 + params.d_ratio());
  if (coordinate(spec.half_extent - 1, spec.dk) < kmax)
    throw InvalidArgument(fmt::format("lattice: grid edge {} does not contain the shell |k| <= {}",
                                      coordinate(spec.half_extent - 1, spec.dk), kmax));
  if (shell_points_estimate(params, spec) > spec.max_points)
    throw NumericalError(fmt::format("lattice: about {:.3g} shell points exceed the budget of {:.3g}",
                                     shell_points_estimate(params, spec), spec.max_points));
}

// Visits every shell point (0 < k^2 - 1 <= d) with fixed k_z index iz.
template <class Visit>
void for_each_shell_point_in_slab(long iz, const ModelParams& params, const LatticeSpec& spec, Visit&& visit) {
  const long m = spec.half_extent;
  const double dk = spec.dk;
  const double d = params.d_ratio();
  const double kz = coordinate(iz, dk);
  const double kz2 = kz * kz;
  if (kz2 > 1.0 + d) return;

  const auto [xlo, xhi] = candidate_range(std::sqrt(1.0 + d - kz2), dk, m);
  for (long ix = xlo; ix <= xhi; ++ix) {
    const double kx = coordinate(ix, dk);
    const double p = kx * kx + kz2;
    if (p > 1.0 + d) continue;
    const auto [olo, ohi] = candidate_range(std::sqrt(1.0 + d - p), dk, m);
    // Points strictly inside the Fermi sphere are skipped wholesale.
    auto [ilo, ihi] = p < 1.0 ? candidate_range(std::sqrt(1.0 - p), dk, m) : std::pair<long, long>{0, -1};
    ilo += 2;  // shrink the widened inner range back so that it is safely interior
    ihi -= 2;
    for (long iy = olo; iy <= ohi; ++iy) {
      if (iy >= ilo && iy <= ihi) {
        iy = ihi;
        continue;
      }
      const double ky = coordinate(iy, dk);
      const double eps = p + ky * ky - 1.0;
      if (eps > 0.0 && eps <= d) visit(kx, ky, kz, eps);
    }
  }
}

struct ShellSlabs {
  std::vector<double> weight;          // sum over the slab of 1/(eps + eb)
  std::vector<double> weight_squared;  // sum over the slab of 1/(eps + eb)^2
  std::size_t points = 0;
};

ShellSlabs shell_slabs(const ModelParams& params, const LatticeSpec& spec) {
  check_shell(params, spec);
  const long m = spec.half_extent;
  const auto n = static_cast<std::size_t>(2 * m);
  const double eb = params.eb_ratio();
  ShellSlabs out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<std::size_t> counts(n, 0);
  detail::parallel_for(n, [&](std::size_t slot) {
    const long iz = static_cast<long>(slot) - m;
    double w = 0.0;
    double w2 = 0.0;
    std::size_t c = 0;
    for_each_shell_point_in_slab(iz, params, spec, [&](double, double, double, double eps) {
      const double gamma = 1.0 / (eps + eb);
      w += gamma;
      w2 += gamma * gamma;
      ++c;
    });
    out.weight[slot] = w;
    out.weight_squared[slot] = w2;
    counts[slot] = c;
  });
  for (auto c : counts) out.points += c;
  return out;
}

}  // namespace

void validate(const LatticeSpec& spec) {
  if (spec.half_extent < 1) throw InvalidArgument(fmt::format("lattice: half_extent must be >= 1, got {}", spec.half_extent));
  if (!std::isfinite(spec.dk) || spec.dk <= 0.0)
    throw InvalidArgument(fmt::format("lattice: dk must be finite and > 0, got {}", spec.dk));
  const double sphere_points = 4.0 / 3.0 * std::numbers::pi / (spec.dk * spec.dk * spec.dk);
  if (sphere_points < 10.0)
    throw InvalidArgument(fmt::format("lattice: dk = {} leaves fewer than 10 points in the Fermi sphere", spec.dk));
}

LatticeSpec lattice_spec_for(double dk, const ModelParams& params) {
  if (!std::isfinite(dk) || dk <= 0.0) throw InvalidArgument(fmt::format("lattice: dk must be > 0, got {}", dk));
  const double kmax = std::sqrt(1.0 + params.d_ratio());
  return {static_cast<long>(std::ceil(kmax / dk + 0.5)) + 1, dk};
}

LatticeSpec default_lattice_spec(const ModelParams& params) { return lattice_spec_for(kDefaultDk, params); }

LatticeValue lattice_f_n(RadialPoint x, const ModelParams& params, const LatticeSpec& spec) {
  const ShellSlabs slabs = shell_slabs(params, spec);
  const long m = spec.half_extent;
  std::vector<double> re(slabs.weight.size());
  std::vector<double> im(slabs.weight.size());
  for (std::size_t s = 0; s < re.size(); ++s) {
    const double phase = coordinate(static_cast<long>(s) - m, spec.dk) * x.value();
    re[s] = std::cos(phase) * slabs.weight[s];
    im[s] = std::sin(phase) * slabs.weight[s];
  }
  const double scale = spec.dk * spec.dk * spec.dk / (2.0 * std::numbers::pi);
  return {scale * pairwise_sum(re), scale * pairwise_sum(im), slabs.points};
}

std::vector<double> lattice_f_n_profile(std::span<const double> xs, const ModelParams& params,
                                        const LatticeSpec& spec) {
  const ShellSlabs slabs = shell_slabs(params, spec);
  const long m = spec.half_extent;
  const double scale = spec.dk * spec.dk * spec.dk / (2.0 * std::numbers::pi);
  std::vector<double> out;
  out.reserve(xs.size());
  std::vector<double> terms(slabs.weight.size());
  for (double x : xs) {
    const RadialPoint point(x);
    for (std::size_t s = 0; s < terms.size(); ++s)
      terms[s] = std::cos(coordinate(static_cast<long>(s) - m, spec.dk) * point.value()) * slabs.weight[s];
    out.push_back(scale * pairwise_sum(terms));
  }
  return out;
}

LatticeValue lattice_f_n_along(RadialPoint x, const std::array<double, 3>& direction, const ModelParams& params,
                               const LatticeSpec& spec) {
  check_shell(params, spec);
  const double norm = std::hypot(direction[0], direction[1], direction[2]);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("lattice: direction must be a non-zero vector");
  const double rx = direction[0] / norm * x.value();
  const double ry = direction[1] / norm * x.value();
  const double rz = direction[2] / norm * x.value();
  const double eb = params.eb_ratio();

  const long m = spec.half_extent;
  const auto n = static_cast<std::size_t>(2 * m);
  std::vector<double> re(n, 0.0);
  std::vector<double> im(n, 0.0);
  std::vector<std::size_t> counts(n, 0);
  detail::parallel_for(n, [&](std::size_t slot) {
    double r = 0.0;
    double i = 0.0;
    std::size_t c = 0;
    for_each_shell_point_in_slab(static_cast<long>(slot) - m, params, spec,
                                 [&](double kx, double ky, double kz, double eps) {
                                   const double phase = kx * rx + ky * ry + kz * rz;
                                   const double gamma = 1.0 / (eps + eb);
                                   r += gamma * std::cos(phase);
                                   i += gamma * std::sin(phase);
                                   ++c;
                                 });
    re[slot] = r;
    im[slot] = i;
    counts[slot] = c;
  });
  std::size_t points = 0;
  for (auto c : counts) points += c;
  const double scale = spec.dk * spec.dk * spec.dk / (2.0 * std::numbers::pi);
  return {scale * pairwise_sum(re), scale * pairwise_sum(im), points};
}

LatticeValue lattice_g(RadialPoint x, const LatticeSpec& spec) {
  validate(spec);
  const long m = spec.half_extent;
  const double dk = spec.dk;
  if (coordinate(m - 1, dk) < 1.0)
    throw InvalidArgument(fmt::format("lattice: grid edge {} does not contain the Fermi sphere", coordinate(m - 1, dk)));

  // Per k_z slab, count the points with k^2 <= 1; each column's y-range is
  // found from a square root estimate and settled by the exact predicate.
  const auto n = static_cast<std::size_t>(2 * m);
  std::vector<double> counts(n, 0.0);
  detail::parallel_for(n, [&](std::size_t slot) {
    const double kz = coordinate(static_cast<long>(slot) - m, dk);
    const double kz2 = kz * kz;
    if (kz2 > 1.0) return;
    const auto [xlo, xhi] = candidate_range(std::sqrt(1.0 - kz2), dk, m);
    double c = 0.0;
    for (long ix = xlo; ix <= xhi; ++ix) {
      const double kx = coordinate(ix, dk);
      const double p = kx * kx + kz2;
      if (p > 1.0) continue;
      const auto [ylo, yhi] = candidate_range(std::sqrt(1.0 - p), dk, m);
      for (long iy = ylo; iy <= yhi; ++iy) {
        const double ky = coordinate(iy, dk);
        if (p + ky * ky <= 1.0) c += 1.0;
      }
    }
    counts[slot] = c;
  });

  std::vector<double> re(n);
  std::vector<double> im(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double phase = coordinate(static_cast<long>(s) - m, dk) * x.value();
    re[s] = std::cos(phase) * counts[s];
    im[s] = std::sin(phase) * counts[s];
  }
  const double total = pairwise_sum(counts);
  return {pairwise_sum(re) / total, pairwise_sum(im) / total, static_cast<std::size_t>(total)};
}

double lattice_norm(const ModelParams& params, const LatticeSpec& spec) {
  const ShellSlabs slabs = shell_slabs(params, spec);
  const double scale = params.eb_ratio() * spec.dk * spec.dk * spec.dk / (2.0 * std::numbers::pi);
  return scale * pairwise_sum(slabs.weight_squared);
}

}  // namespace kondo
