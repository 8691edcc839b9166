#pragma once

// Computations and serializers behind the kondo_ent subcommands.
//
// CSV: header row with unit annotations, 17 significant digits, fixed
// column order. JSON: the same data plus a "meta" block (tool, version,
// parameters, cutoff mode, regime flag). Output path "-" means stdout.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kondo/densmat.hpp"
#include "kondo/entanglement.hpp"
#include "kondo/model.hpp"
#include "kondo/oracle.hpp"

namespace kondo::cli {

inline constexpr std::string_view kToolName = "kondo_ent";
inline constexpr std::string_view kToolVersion = "1.0.0";

enum class Spacing { Linear, Log };
enum class OutputFormat { Csv, Json };

Spacing parse_spacing(std::string_view text);
OutputFormat parse_format(std::string_view text);

/// `points` values from lo to hi inclusive.
std::vector<double> make_grid(double lo, double hi, std::size_t points, Spacing spacing);

/// Writes `content` to `path` ("-" for stdout). Throws Error if the file cannot be written.
void write_output(const std::string& path, const std::string& content);

// ---- profile ---------------------------------------------------------------

struct SweepConfig {
  ModelParams params;
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t points = 0;
  Spacing spacing = Spacing::Linear;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path = "-";
};

/// Throws InvalidArgument unless 0 <= x_min < x_max, points >= 2, and x_min > 0 for Log spacing.
void validate(const SweepConfig& config);

struct ProfileRow {
  double x;
  double f_n;
  double f_n_normalized;  ///< f_n / f_n(0)
  double f_over_n;
  double p;
  double corr_zz;
  double cond_lhs;
  double g;
};

struct ProfileTable {
  ModelParams params;
  double f_n_origin;
  double y;
  std::vector<ProfileRow> rows;
};

ProfileTable compute_profile(const SweepConfig& config);
std::string format_profile(const ProfileTable& table, OutputFormat format);
ProfileTable cmd_profile(const SweepConfig& config);

// ---- scan ------------------------------------------------------------------

struct ScanConfig {
  std::vector<double> eb_list{1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
  std::vector<double> d_list{0.05, 0.1, 0.3};
  CutoffMode cutoff_mode = CutoffMode::Derived;
  /// x range upper end in units of the screening length xi_K k_F, used unless x_max is set.
  double x_max_xi = 10.0;
  std::optional<double> x_max;
  std::size_t points = 1000;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path = "-";
};

struct ScanCell {
  double eb_ratio;
  double d_ratio;
  bool physical_regime;
  double x_max;
  double max_cond_lhs;
  double x_at_max;
  double max_negativity;
  double max_concurrence;
  std::size_t entangled_states;
  std::size_t states;
};

struct ScanResult {
  CutoffMode cutoff_mode;
  std::vector<ScanCell> cells;
  double global_max;
  bool any_entangled;  ///< global_max > 1
  std::size_t entangled_states;  ///< states with negativity above the floor, over all cells
};

ScanResult run_scan(const ScanConfig& config);
std::string format_scan(const ScanResult& result, OutputFormat format);
ScanResult cmd_scan(const ScanConfig& config);

// ---- rho -------------------------------------------------------------------

enum class RhoKind { Impurity, ImpurityConduction, Free, Conduction };

RhoKind parse_rho_kind(std::string_view text);
std::string_view to_string(RhoKind kind) noexcept;

struct RhoRequest {
  RhoKind kind = RhoKind::Impurity;
  std::optional<ModelParams> params;
  std::optional<double> x;
  std::optional<double> x1;
  std::optional<double> x2;
  std::optional<double> x_rel;
  std::string output_path = "-";
};

struct RhoResult {
  RhoKind kind;
  std::optional<ModelParams> params;
  Eigen::MatrixXcd raw;
  std::string raw_units;
  Eigen::MatrixXcd normalized;
  double entropy_bits;
  std::optional<WernerDecomposition> werner;
  std::optional<EntanglementReport> report;
  std::optional<double> f_over_n;
};

/// Throws InvalidArgument when the supplied geometry or parameters do not
/// match the kind: Impurity takes nothing, ImpurityConduction x and params,
/// Free x_rel, Conduction x1, x2, x_rel and params.
RhoResult run_rho(const RhoRequest& request);
std::string format_rho(const RhoResult& result);
RhoResult cmd_rho(const RhoRequest& request);

// ---- oracle ----------------------------------------------------------------

struct OracleConfig {
  ModelParams params;
  std::optional<double> dk = std::nullopt;  ///< default lattice spacing when empty
  std::vector<double> xs{0.0, 1.0, 3.141592653589793, 10.0};
  double gate = 0.01;
  OutputFormat format = OutputFormat::Csv;
  std::string output_path = "-";
};

struct OracleRow {
  std::string quantity;
  std::optional<double> x;
  double continuum;
  double lattice;
  double rel_error;
  bool gated;
  bool passed;
};

struct OracleReport {
  ModelParams params;
  LatticeSpec spec;
  double gate;
  std::vector<OracleRow> rows;
  bool passed;  ///< every gated row within the gate
};

OracleReport run_oracle(const OracleConfig& config);
std::string format_oracle(const OracleReport& report, OutputFormat format);
OracleReport cmd_oracle(const OracleConfig& config);

/// |lattice - continuum| / |continuum|; 0 when both vanish, infinity when only continuum does.
double relative_error(double lattice, double continuum) noexcept;

}  // namespace kondo::cli
