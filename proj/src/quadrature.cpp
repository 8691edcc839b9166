#include "kondo/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include <fmt/format.h>

#include "kondo/error.hpp"

namespace kondo {
namespace {

// 21-point Kronrod abscissae on [0, 1); odd indices are the 10-point Gauss nodes.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208526140000, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

constexpr double kWg[5] = {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
                           0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
                           0.295524224714752870173892994651338};

constexpr std::size_t kPointsPerRule = 21;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double floor;   // rounding noise of the rule on this segment, 50 eps * int |f|
  bool at_floor;  // error already equals the roundoff floor of the rule

  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(const Integrand& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) throw NumericalError(fmt::format("integrand is not finite at t = {}", t));
  return v;
}

// QUADPACK qk21 with its error heuristic.
Segment gauss_kronrod21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  double fv1[10];
  double fv2[10];
  const double fc = checked(f, center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);

  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = checked(f, center - dx);
    const double f2 = checked(f, center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }

  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;

  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * kEps * resabs;
  bool at_floor = false;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps) && err <= floor) {
    err = floor;
    at_floor = true;
  }
  // Intervals too narrow to bisect in floating point cannot be refined either.
  if (abs_half <= 100.0 * kEps * std::max(std::abs(a), std::abs(b))) at_floor = true;
  return {a, b, result, err, floor, at_floor};
}

void check_inputs(double a, double b, const QuadratureOptions& options) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("integration limits must be finite");
  if (a > b) throw InvalidArgument(fmt::format("integration limits must satisfy a <= b, got [{}, {}]", a, b));
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0))
    throw InvalidArgument(
        fmt::format("tolerances must be > 0, got rel_tol = {}, abs_tol = {}", options.rel_tol, options.abs_tol));
  if (options.max_evaluations < kPointsPerRule)
    throw InvalidArgument(fmt::format("max_evaluations must be at least {}", kPointsPerRule));
}

double sum_values(const std::vector<Segment>& segments, std::priority_queue<Segment> queue, double* error) {
  // Fixed-order accumulation: settled segments first, then the heap drained in error order.
  double value = 0.0;
  double err = 0.0;
  for (const auto& s : segments) {
    value += s.value;
    err += s.error;
  }
  while (!queue.empty()) {
    value += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  *error = err;
  return value;
}

QuadratureResult adapt(const Integrand& f, const std::vector<double>& breakpoints, const QuadratureOptions& options) {
  const std::size_t panels = breakpoints.size() - 1;
  if (panels * kPointsPerRule > options.max_evaluations)
    throw BudgetExceeded(fmt::format("initial partition of {} panels exceeds the budget of {} evaluations", panels,
                                     options.max_evaluations),
                         std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(), 0);

  std::priority_queue<Segment> active;
  std::vector<Segment> settled;
  std::size_t evaluations = 0;
  double value = 0.0;
  double error = 0.0;
  double noise = 0.0;

  for (std::size_t i = 0; i < panels; ++i) {
    Segment s = gauss_kronrod21(f, breakpoints[i], breakpoints[i + 1]);
    evaluations += kPointsPerRule;
    value += s.value;
    error += s.error;
    noise += s.floor;
    if (s.at_floor)
      settled.push_back(s);
    else
      active.push(s);
  }

  bool roundoff_limited = false;
  for (;;) {
    const double requested = std::max(options.abs_tol, options.rel_tol * std::abs(value));
    if (error <= requested) break;
    // Cancelling integrands: the part of the error above the summed rounding
    // floor is already no larger than that floor, so bisection cannot help.
    if (error - noise <= noise) {
      roundoff_limited = true;
      break;
    }
    if (active.empty()) {
      roundoff_limited = true;
      break;
    }
    if (evaluations + 2 * kPointsPerRule > options.max_evaluations) {
      double err = 0.0;
      const double best = sum_values(settled, active, &err);
      throw BudgetExceeded(
          fmt::format("quadrature did not converge within {} evaluations (estimate {}, error {})",
                      options.max_evaluations, best, err),
          best, err, evaluations);
    }
    const Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = gauss_kronrod21(f, worst.a, mid);
    const Segment right = gauss_kronrod21(f, mid, worst.b);
    evaluations += 2 * kPointsPerRule;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    noise += left.floor + right.floor - worst.floor;
    for (const Segment& s : {left, right}) {
      if (s.at_floor)
        settled.push_back(s);
      else
        active.push(s);
    }
  }

  // Recompute the totals from the final partition to shed drift from the
  // running add/subtract updates.
  QuadratureResult out;
  out.value = sum_values(settled, std::move(active), &out.error_estimate);
  out.evaluations = evaluations;
  out.roundoff_limited = roundoff_limited;
  return out;
}

}  // namespace

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options) {
  check_inputs(a, b, options);
  return adapt(f, {a, b}, options);
}

QuadratureResult integrate_oscillatory(const Integrand& f, double a, double b, double wavenumber_hint,
                                       const QuadratureOptions& options) {
  check_inputs(a, b, options);
  if (!std::isfinite(wavenumber_hint) || wavenumber_hint <= 0.0)
    throw InvalidArgument(fmt::format("wavenumber_hint must be finite and > 0, got {}", wavenumber_hint));

  const double half_period = std::numbers::pi / wavenumber_hint;
  const double count = std::ceil((b - a) / half_period);
  if (count * kPointsPerRule > static_cast<double>(options.max_evaluations))
    throw BudgetExceeded(fmt::format("{} half-period panels exceed the budget of {} evaluations", count,
                                     options.max_evaluations),
                         std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(), 0);
  const auto panels = std::max<std::size_t>(1, static_cast<std::size_t>(count));

  std::vector<double> breakpoints;
  breakpoints.reserve(panels + 1);
  breakpoints.push_back(a);
  // Interior breakpoints within rounding of b are dropped.
  for (std::size_t i = 1; i < panels; ++i) {
    const double t = a + static_cast<double>(i) * half_period;
    if (!(t < b)) break;
    breakpoints.push_back(t);
  }
  breakpoints.push_back(b);
  return adapt(f, breakpoints, options);
}

}  // namespace kondo
