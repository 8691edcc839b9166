#include "kondo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "kondo/error.hpp"
#include "kondo/kernels.hpp"
#include "kondo/parallel.hpp"

namespace kondo::cli {
namespace {

using nlohmann::json;

std::string num(double v) { return fmt::format("{:.17g}", v); }

json params_json(const ModelParams& p) {
  const DerivedScales s = derive_scales(p);
  return {{"eb_ratio", p.eb_ratio()},
          {"d_ratio", p.d_ratio()},
          {"cutoff_mode", std::string(to_string(p.cutoff_mode()))},
          {"cutoff", p.cutoff()},
          {"physical_regime", p.in_physical_regime()},
          {"xi_k", s.xi_k},
          {"lambda_f", s.lambda_f}};
}

json meta_json(std::string_view command) {
  return {{"tool", std::string(kToolName)}, {"version", std::string(kToolVersion)}, {"command", std::string(command)}};
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

Spacing parse_spacing(std::string_view text) {
  if (text == "linear") return Spacing::Linear;
  if (text == "log") return Spacing::Log;
  throw InvalidArgument(fmt::format("spacing: expected 'linear' or 'log', got '{}'", text));
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw InvalidArgument(fmt::format("format: expected 'csv' or 'json', got '{}'", text));
}

std::vector<double> make_grid(double lo, double hi, std::size_t points, Spacing spacing) {
  if (points < 2) throw InvalidArgument(fmt::format("points: need at least 2, got {}", points));
  if (!(lo < hi)) throw InvalidArgument(fmt::format("grid: need x_min < x_max, got [{}, {}]", lo, hi));
  if (spacing == Spacing::Log && !(lo > 0.0))
    throw InvalidArgument(fmt::format("grid: log spacing needs x_min > 0, got {}", lo));
  std::vector<double> xs(points);
  const double steps = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / steps;
    xs[i] = spacing == Spacing::Linear ? lo + (hi - lo) * f : lo * std::pow(hi / lo, f);
  }
  xs.front() = lo;
  xs.back() = hi;
  return xs;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(fmt::format("cannot open '{}' for writing", path));
  out << content;
  if (!out) throw Error(fmt::format("failed writing '{}'", path));
}

// ---- profile ---------------------------------------------------------------

void validate(const SweepConfig& config) {
  if (!std::isfinite(config.x_min) || config.x_min < 0.0)
    throw InvalidArgument(fmt::format("x_min: must be finite and >= 0, got {}", config.x_min));
  if (!std::isfinite(config.x_max)) throw InvalidArgument("x_max: must be finite");
  if (!(config.x_min < config.x_max))
    throw InvalidArgument(fmt::format("x_min < x_max required, got {} and {}", config.x_min, config.x_max));
  if (config.points < 2) throw InvalidArgument(fmt::format("points: need at least 2, got {}", config.points));
  if (config.spacing == Spacing::Log && !(config.x_min > 0.0))
    throw InvalidArgument("x_min: log spacing needs x_min > 0");
}

ProfileTable compute_profile(const SweepConfig& config) {
  validate(config);
  const KernelEvaluator kernels(config.params);
  const auto xs = make_grid(config.x_min, config.x_max, config.points, config.spacing);
  const KernelProfile profile = kernel_profile(kernels, xs);

  ProfileTable table{config.params, kernels.f_n_origin(), kernels.y(), {}};
  table.rows.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    table.rows.push_back({profile.xs[i], profile.f_n[i], profile.f_n[i] / table.f_n_origin, profile.f_over_n[i],
                          profile.p[i], profile.corr_zz[i], profile.cond_lhs[i], profile.g[i]});
  }
  return table;
}

std::string format_profile(const ProfileTable& table, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out = "x[1/k_F],f_n[1],f_n_normalized[1],f_over_n[n],p[1],corr_zz[n],cond_lhs[1],g[1]\n";
    for (const auto& r : table.rows)
      out += fmt::format("{},{},{},{},{},{},{},{}\n", num(r.x), num(r.f_n), num(r.f_n_normalized), num(r.f_over_n),
                         num(r.p), num(r.corr_zz), num(r.cond_lhs), num(r.g));
    return out;
  }
  json meta = meta_json("profile");
  meta["params"] = params_json(table.params);
  meta["f_n_origin"] = table.f_n_origin;
  meta["y"] = table.y;
  meta["units"] = {{"x", "1/k_F"}, {"f_over_n", "n"}, {"corr_zz", "n"}};
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back({{"x", r.x},
                    {"f_n", r.f_n},
                    {"f_n_normalized", r.f_n_normalized},
                    {"f_over_n", r.f_over_n},
                    {"p", r.p},
                    {"corr_zz", r.corr_zz},
                    {"cond_lhs", r.cond_lhs},
                    {"g", r.g}});
  return json{{"meta", meta}, {"rows", rows}}.dump(2) + "\n";
}

ProfileTable cmd_profile(const SweepConfig& config) {
  ProfileTable table = compute_profile(config);
  write_output(config.output_path, format_profile(table, config.format));
  return table;
}

// ---- scan ------------------------------------------------------------------

ScanResult run_scan(const ScanConfig& config) {
  if (config.eb_list.empty() || config.d_list.empty()) throw InvalidArgument("scan: empty parameter grid");
  if (config.points < 2) throw InvalidArgument(fmt::format("points: need at least 2, got {}", config.points));
  if (config.x_max && !(*config.x_max > 0.0)) throw InvalidArgument("x_max: must be > 0");
  if (!config.x_max && !(config.x_max_xi > 0.0)) throw InvalidArgument("x_max_xi: must be > 0");

  ScanResult result{config.cutoff_mode, {}, -std::numeric_limits<double>::infinity(), false, 0};
  for (double eb : config.eb_list) {
    for (double d : config.d_list) {
      const ModelParams params = make_params(eb, d, config.cutoff_mode);
      const KernelEvaluator kernels(params);
      const double x_max = config.x_max ? *config.x_max : config.x_max_xi * derive_scales(params).xi_k;
      const auto xs = make_grid(0.0, x_max, config.points, Spacing::Linear);

      struct Point {
        double cond_lhs;
        double negativity;
        double concurrence;
      };
      std::vector<Point> points(xs.size());
      detail::parallel_for(xs.size(), [&](std::size_t i) {
        const double f = kernels.f_over_n(RadialPoint(xs[i]));
        const NormalizedState state = normalize_to_werner(rho2_impurity_conduction(f));
        points[i] = {2.0 * f, negativity(state.rho.entries), concurrence(state.rho.entries)};
      });

      ScanCell cell{eb, d, params.in_physical_regime(), x_max, -std::numeric_limits<double>::infinity(), 0.0, 0.0,
                    0.0, 0, xs.size()};
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (points[i].cond_lhs > cell.max_cond_lhs) {
          cell.max_cond_lhs = points[i].cond_lhs;
          cell.x_at_max = xs[i];
        }
        cell.max_negativity = std::max(cell.max_negativity, points[i].negativity);
        cell.max_concurrence = std::max(cell.max_concurrence, points[i].concurrence);
        if (points[i].negativity > kEigenvalueFloor) ++cell.entangled_states;
      }
      result.global_max = std::max(result.global_max, cell.max_cond_lhs);
      result.entangled_states += cell.entangled_states;
      result.cells.push_back(cell);
    }
  }
  result.any_entangled = result.global_max > 1.0;
  return result;
}

std::string format_scan(const ScanResult& result, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out =
        "eb_ratio[1],d_ratio[1],physical_regime,x_max[1/k_F],max_cond_lhs[1],x_at_max[1/k_F],max_negativity[1],"
        "max_concurrence[1],entangled_states,states\n";
    for (const auto& c : result.cells)
      out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", num(c.eb_ratio), num(c.d_ratio), c.physical_regime ? 1 : 0,
                         num(c.x_max), num(c.max_cond_lhs), num(c.x_at_max), num(c.max_negativity),
                         num(c.max_concurrence), c.entangled_states, c.states);
    return out;
  }
  json meta = meta_json("scan");
  meta["cutoff_mode"] = std::string(to_string(result.cutoff_mode));
  json cells = json::array();
  for (const auto& c : result.cells)
    cells.push_back({{"eb_ratio", c.eb_ratio},
                     {"d_ratio", c.d_ratio},
                     {"physical_regime", c.physical_regime},
                     {"x_max", c.x_max},
                     {"max_cond_lhs", c.max_cond_lhs},
                     {"x_at_max", c.x_at_max},
                     {"max_negativity", c.max_negativity},
                     {"max_concurrence", c.max_concurrence},
                     {"entangled_states", c.entangled_states},
                     {"states", c.states}});
  return json{{"meta", meta},
              {"cells", cells},
              {"global_max", result.global_max},
              {"any_entangled", result.any_entangled},
              {"entangled_states", result.entangled_states}}
             .dump(2) +
         "\n";
}

ScanResult cmd_scan(const ScanConfig& config) {
  ScanResult result = run_scan(config);
  write_output(config.output_path, format_scan(result, config.format));
  return result;
}

// ---- rho -------------------------------------------------------------------

RhoKind parse_rho_kind(std::string_view text) {
  if (text == "impurity") return RhoKind::Impurity;
  if (text == "impurity-conduction") return RhoKind::ImpurityConduction;
  if (text == "free") return RhoKind::Free;
  if (text == "conduction") return RhoKind::Conduction;
  throw InvalidArgument(
      fmt::format("kind: expected impurity, impurity-conduction, free or conduction, got '{}'", text));
}

std::string_view to_string(RhoKind kind) noexcept {
  switch (kind) {
    case RhoKind::Impurity:
      return "impurity";
    case RhoKind::ImpurityConduction:
      return "impurity-conduction";
    case RhoKind::Free:
      return "free";
    case RhoKind::Conduction:
      return "conduction";
  }
  return "impurity";
}

RhoResult run_rho(const RhoRequest& request) {
  const bool has_x = request.x.has_value();
  const bool has_triple = request.x1.has_value() || request.x2.has_value();
  const bool has_rel = request.x_rel.has_value();
  auto require = [&](bool ok, std::string_view what) {
    if (!ok) throw InvalidArgument(fmt::format("rho {}: {}", to_string(request.kind), what));
  };

  RhoResult out{request.kind, std::nullopt, {}, {}, {}, 0.0, std::nullopt, std::nullopt, std::nullopt};
  TwoSpinDensityMatrix raw{};
  std::optional<double> condition;

  switch (request.kind) {
    case RhoKind::Impurity: {
      require(!has_x && !has_triple && !has_rel, "takes no geometry");
      const Matrix2c rho = impurity_rho();
      out.raw = rho;
      out.raw_units = "trace-one";
      out.normalized = rho;
      out.entropy_bits = von_neumann_entropy(rho);
      return out;
    }
    case RhoKind::ImpurityConduction: {
      require(has_x && !has_triple && !has_rel, "needs --x and nothing else");
      require(request.params.has_value(), "needs model parameters");
      const KernelEvaluator kernels(*request.params);
      const double f = kernels.f_over_n(RadialPoint(*request.x));
      raw = rho2_impurity_conduction(f);
      out.f_over_n = f;
      condition = 2.0 * f;
      break;
    }
    case RhoKind::Free:
      require(has_rel && !has_x && !has_triple, "needs --x-rel and nothing else");
      raw = rho2_free(RadialPoint(*request.x_rel));
      break;
    case RhoKind::Conduction: {
      require(request.x1 && request.x2 && has_rel && !has_x, "needs --x1, --x2 and --x-rel");
      require(request.params.has_value(), "needs model parameters");
      const ConductionGeometry geometry(RadialPoint(*request.x1), RadialPoint(*request.x2),
                                        RadialPoint(*request.x_rel));
      raw = rho2_conduction(geometry, KernelEvaluator(*request.params));
      break;
    }
  }
  if (request.kind != RhoKind::Free) out.params = request.params;

  const NormalizedState state = normalize_to_werner(raw);
  out.raw = raw.entries;
  out.raw_units = to_string(raw.normalization);
  out.normalized = state.rho.entries;
  out.werner = state.werner;
  out.report = assess(state.rho.entries, condition);
  out.entropy_bits = out.report->entropy_bits;
  return out;
}

std::string format_rho(const RhoResult& r) {
  json meta = meta_json("rho");
  if (r.params) meta["params"] = params_json(*r.params);
  json doc{{"meta", meta},
           {"kind", std::string(to_string(r.kind))},
           {"basis", {"up,up", "up,down", "down,up", "down,down"}},
           {"matrix_raw", {{"units", r.raw_units}, {"entries", matrix_json(r.raw)}}},
           {"matrix_normalized", {{"units", "trace-one"}, {"entries", matrix_json(r.normalized)}}}};
  if (r.kind == RhoKind::Impurity) {
    doc["basis"] = {"up", "down"};
    doc["report"] = {{"entropy_bits", r.entropy_bits}};
    return doc.dump(2) + "\n";
  }
  if (r.f_over_n) doc["f_over_n"] = *r.f_over_n;
  doc["werner"] = {{"p", r.werner->p}, {"residual", r.werner->residual}};
  const auto& rep = *r.report;
  doc["report"] = {{"entropy_bits", rep.entropy_bits},
                   {"werner_p", rep.werner_p},
                   {"concurrence", rep.concurrence},
                   {"negativity", rep.negativity},
                   {"entangled", rep.entangled},
                   {"condition_lhs", optional_json(rep.condition_lhs)}};
  return doc.dump(2) + "\n";
}

RhoResult cmd_rho(const RhoRequest& request) {
  RhoResult result = run_rho(request);
  write_output(request.output_path, format_rho(result));
  return result;
}

// ---- oracle ----------------------------------------------------------------

double relative_error(double lattice, double continuum) noexcept {
  const double diff = std::abs(lattice - continuum);
  if (continuum == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / std::abs(continuum);
}

OracleReport run_oracle(const OracleConfig& config) {
  if (config.xs.empty()) throw InvalidArgument("oracle: empty x list");
  if (!(config.gate > 0.0)) throw InvalidArgument(fmt::format("gate: must be > 0, got {}", config.gate));
  const ModelParams& params = config.params;
  const LatticeSpec spec = config.dk ? lattice_spec_for(*config.dk, params) : default_lattice_spec(params);
  validate(spec);

  OracleReport report{params, spec, config.gate, {}, true};
  auto add = [&](std::string quantity, std::optional<double> x, double continuum, double lattice, bool gated) {
    const double rel = relative_error(lattice, continuum);
    const bool passed = rel <= config.gate;
    if (gated && !passed) report.passed = false;
    report.rows.push_back({std::move(quantity), x, continuum, lattice, rel, gated, passed});
  };

  const KernelEvaluator kernels(params);
  const auto lattice_fn = lattice_f_n_profile(config.xs, params, spec);
  for (std::size_t i = 0; i < config.xs.size(); ++i)
    add("f_n", config.xs[i], kernels.f_n(RadialPoint(config.xs[i])), lattice_fn[i], true);
  for (double x : config.xs) add("g", x, g_fn(RadialPoint(x)), lattice_g(RadialPoint(x), spec).real, true);

  // The lattice shell always runs over 0 < eps <= D, so it tests which
  // upper limit of the continuum integral is the consistent one.
  const double norm = lattice_norm(params, spec);
  add("norm", std::nullopt, kernels.y(), norm, true);
  const CutoffMode other =
      params.cutoff_mode() == CutoffMode::Derived ? CutoffMode::Literal : CutoffMode::Derived;
  const ModelParams alt = make_params(params.eb_ratio(), params.d_ratio(), other);
  add(fmt::format("norm_vs_{}", to_string(other)), std::nullopt, y_integral(alt), norm, false);
  return report;
}

std::string format_oracle(const OracleReport& report, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out = "quantity,x[1/k_F],continuum,lattice,rel_error,gated,passed\n";
    for (const auto& r : report.rows)
      out += fmt::format("{},{},{},{},{},{},{}\n", r.quantity, r.x ? num(*r.x) : std::string(), num(r.continuum),
                         num(r.lattice), num(r.rel_error), r.gated ? 1 : 0, r.passed ? 1 : 0);
    return out;
  }
  json meta = meta_json("oracle");
  meta["params"] = params_json(report.params);
  meta["lattice"] = {{"half_extent", report.spec.half_extent}, {"dk", report.spec.dk}};
  meta["gate"] = report.gate;
  json rows = json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"quantity", r.quantity},
                    {"x", optional_json(r.x)},
                    {"continuum", r.continuum},
                    {"lattice", r.lattice},
                    {"rel_error", r.rel_error},
                    {"gated", r.gated},
                    {"passed", r.passed}});
  return json{{"meta", meta}, {"rows", rows}, {"passed", report.passed}}.dump(2) + "\n";
}

OracleReport cmd_oracle(const OracleConfig& config) {
  OracleReport report = run_oracle(config);
  write_output(config.output_path, format_oracle(report, config.format));
  return report;
}

}  // namespace kondo::cli
