#include "kondo/kernels.hpp"

#include <cmath>

#include <fmt/format.h>

#include "kondo/error.hpp"
#include "kondo/parallel.hpp"

namespace kondo {

KernelEvaluator::KernelEvaluator(const ModelParams& params, const QuadratureOptions& options)
    : params_(params), options_(options) {
  const double eb = params_.eb_ratio();
  const double lambda = params_.cutoff();
  f_n_origin_ = integrate([eb](double t) { return std::sqrt(1.0 + t * eb) / (1.0 + t); }, 0.0, lambda, options_).value;
  y_ = integrate(
           [eb](double t) {
             const double s = 1.0 + t;
             return std::sqrt(1.0 + t * eb) / (s * s);
           },
           0.0, lambda, options_)
           .value;
  taylor_x2_ = integrate(
                   [eb](double t) {
                     const double phase = std::sqrt(1.0 + t * eb);
                     return phase * phase * phase / (1.0 + t);
                   },
                   0.0, lambda, options_)
                   .value;
}

double KernelEvaluator::f_n(RadialPoint point) const {
  const double x = point.value();
  if (x < kSmallXSwitch) return f_n_origin_ - x * x / 6.0 * taylor_x2_;

  const double eb = params_.eb_ratio();
  const double lambda = params_.cutoff();
  const auto integrand = [x, eb](double t) { return std::sin(x * std::sqrt(1.0 + t * eb)) / (1.0 + t); };
  try {
    if (x * std::sqrt(1.0 + lambda * eb) >= kOscillatoryPhaseThreshold) {
      // Local wavenumber d/dt [x sqrt(1 + t eb)] is largest at t = 0.
      return integrate_oscillatory(integrand, 0.0, lambda, 0.5 * x * eb, options_).value / x;
    }
    return integrate(integrand, 0.0, lambda, options_).value / x;
  } catch (const NumericalError& e) {
    throw NumericalError(fmt::format("f_n at x = {}: {}", x, e.what()));
  }
}

double KernelEvaluator::f_over_n(RadialPoint x) const { return f_over_n_from(f_n(x), params_.eb_ratio(), y_); }

double KernelEvaluator::condition_lhs(RadialPoint x) const { return 2.0 * f_over_n(x); }

double KernelEvaluator::werner_p(RadialPoint x) const { return werner_weight(f_over_n(x)); }

double KernelEvaluator::corr_zz(RadialPoint x) const { return -2.0 * f_over_n(x); }

KernelSample KernelEvaluator::sample(RadialPoint x) const {
  KernelSample s{};
  s.x = x.value();
  s.f_n = f_n(x);
  s.f_over_n = f_over_n_from(s.f_n, params_.eb_ratio(), y_);
  s.p = werner_weight(s.f_over_n);
  s.corr_zz = -2.0 * s.f_over_n;
  s.cond_lhs = 2.0 * s.f_over_n;
  s.g = g_fn(x);
  return s;
}

KernelProfile kernel_profile(const KernelEvaluator& kernels, std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw InvalidArgument("kernel_profile: xs must be strictly increasing");

  std::vector<KernelSample> samples(xs.size());
  detail::parallel_for(xs.size(), [&](std::size_t i) { samples[i] = kernels.sample(RadialPoint(xs[i])); });

  KernelProfile out;
  const auto n = samples.size();
  for (auto* v : {&out.xs, &out.f_n, &out.f_over_n, &out.p, &out.corr_zz, &out.cond_lhs, &out.g}) v->reserve(n);
  for (const auto& s : samples) {
    out.xs.push_back(s.x);
    out.f_n.push_back(s.f_n);
    out.f_over_n.push_back(s.f_over_n);
    out.p.push_back(s.p);
    out.corr_zz.push_back(s.corr_zz);
    out.cond_lhs.push_back(s.cond_lhs);
    out.g.push_back(s.g);
  }
  return out;
}

double f_n(RadialPoint x, const ModelParams& params) { return KernelEvaluator(params).f_n(x); }
double y_integral(const ModelParams& params) { return KernelEvaluator(params).y(); }
double f_over_n(RadialPoint x, const ModelParams& params) { return KernelEvaluator(params).f_over_n(x); }
double condition_lhs(RadialPoint x, const ModelParams& params) { return KernelEvaluator(params).condition_lhs(x); }
double werner_p(RadialPoint x, const ModelParams& params) { return KernelEvaluator(params).werner_p(x); }
double corr_zz(RadialPoint x, const ModelParams& params) { return KernelEvaluator(params).corr_zz(x); }

double g_fn(RadialPoint point) noexcept {
  const double x = point.value();
  if (x < 1.0) {
    // 3 sum_{k>=1} (-1)^{k+1} 2k x^{2k-2} / (2k+1)!; sin x - x cos x cancels badly here.
    const double x2 = x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 2; k <= 12; ++k) {
      term *= -x2 * static_cast<double>(k) / ((k - 1) * (2.0 * k) * (2.0 * k + 1.0));
      sum += term;
    }
    return sum;
  }
  return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double f_over_n_from(double f_n, double eb_ratio, double y) noexcept { return 0.75 * eb_ratio * f_n * f_n / y; }

double werner_weight(double f_over_n) noexcept { return f_over_n / (1.0 + f_over_n); }

}  // namespace kondo
