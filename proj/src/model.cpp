#include "kondo/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <fmt/format.h>

#include "kondo/error.hpp"

namespace kondo {

std::string_view to_string(CutoffMode mode) noexcept {
  switch (mode) {
    case CutoffMode::Derived:
      return "derived";
    case CutoffMode::Literal:
      return "paper-literal";
  }
  return "derived";
}

CutoffMode parse_cutoff_mode(std::string_view text) {
  if (text == "derived") return CutoffMode::Derived;
  if (text == "paper-literal") return CutoffMode::Literal;
  throw InvalidArgument(fmt::format("cutoff_mode: expected 'derived' or 'paper-literal', got '{}'", text));
}

double ModelParams::cutoff() const noexcept {
  return mode_ == CutoffMode::Derived ? d_ratio_ / eb_ratio_ : d_ratio_;
}

bool ModelParams::in_physical_regime() const noexcept {
  return eb_ratio_ < d_ratio_ && d_ratio_ < 1.0;
}

ModelParams make_params(double eb_ratio, double d_ratio, CutoffMode mode) {
  auto check = [](const char* name, double v) {
    if (!std::isfinite(v) || v <= 0.0)
      throw InvalidArgument(fmt::format("{}: must be finite and > 0, got {}", name, v));
  };
  check("eb_ratio", eb_ratio);
  check("d_ratio", d_ratio);
  ModelParams p(eb_ratio, d_ratio, mode);
  if (!(p.cutoff() > 0.0) || !std::isfinite(p.cutoff()))
    throw InvalidArgument(fmt::format("cutoff: d_ratio/eb_ratio = {} is not a usable limit", p.cutoff()));
  return p;
}

DerivedScales derive_scales(const ModelParams& params) noexcept {
  return {2.0 / params.eb_ratio(), 2.0 * std::numbers::pi, params.cutoff()};
}

double kondo_binding_energy(double j_n0, double d_ratio) {
  if (!std::isfinite(j_n0) || j_n0 >= 0.0)
    throw InvalidArgument(fmt::format("j_n0: coupling must be finite and < 0, got {}", j_n0));
  if (!std::isfinite(d_ratio) || d_ratio <= 0.0)
    throw InvalidArgument(fmt::format("d_ratio: must be finite and > 0, got {}", d_ratio));
  const double eb = d_ratio * std::exp(2.0 / (3.0 * j_n0));
  // Both ends are reachable in floating point: |J N(0)| tiny underflows,
  // |J N(0)| huge rounds the exponential to one.
  if (!(eb > 0.0) || !(eb < d_ratio))
    throw NumericalError(fmt::format("kondo_binding_energy: E_B/E_F for j_n0 = {} is not representable "
                                     "strictly inside (0, d_ratio)",
                                     j_n0));
  return eb;
}

RadialPoint::RadialPoint(double x) : x_(x) {
  if (!std::isfinite(x) || x < 0.0)
    throw InvalidArgument(fmt::format("x: radial point must be finite and >= 0, got {}", x));
}

}  // namespace kondo
