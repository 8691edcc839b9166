#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "kondo/commands.hpp"
#include "kondo/error.hpp"

using namespace kondo;
using namespace kondo::cli;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string field;
  while (std::getline(s, field, sep)) out.push_back(field);
  return out;
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "kondo_ent_unit";
  std::filesystem::create_directories(dir);
  return dir;
}

SweepConfig reference_sweep() {
  SweepConfig c{make_params(1e-3, 0.1)};
  c.x_min = 0.0;
  c.x_max = 6000.0;
  c.points = 200;
  return c;
}

}  // namespace

TEST_CASE("grids") {
  const auto lin = make_grid(0.0, 1.0, 5, Spacing::Linear);
  CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto lg = make_grid(1e-2, 1e2, 5, Spacing::Log);
  CHECK(lg.front() == 1e-2);
  CHECK(lg.back() == 1e2);
  CHECK(lg[2] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 1, Spacing::Linear), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 3, Spacing::Linear), InvalidArgument);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 3, Spacing::Log), InvalidArgument);

  CHECK(parse_spacing("log") == Spacing::Log);
  CHECK(parse_format("json") == OutputFormat::Json);
  CHECK_THROWS_AS(parse_spacing("geometric"), InvalidArgument);
  CHECK_THROWS_AS(parse_format("xml"), InvalidArgument);
}

TEST_CASE("sweep validation") {
  auto c = reference_sweep();
  c.points = 1;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  CHECK_THROWS_AS(compute_profile(c), InvalidArgument);
  c = reference_sweep();
  c.x_max = c.x_min;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c = reference_sweep();
  c.x_min = -1.0;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c = reference_sweep();
  c.spacing = Spacing::Log;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.x_min = 1e-3;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("profile rows satisfy the kernel identities") {
  const auto table = compute_profile(reference_sweep());
  REQUIRE(table.rows.size() == 200);
  CHECK(table.rows.front().x == 0.0);
  CHECK(table.rows.front().f_n_normalized == 1.0);
  CHECK(table.rows.back().x == 6000.0);
  for (const auto& r : table.rows) {
    CHECK(r.f_n_normalized == r.f_n / table.f_n_origin);
    CHECK(r.cond_lhs == 2.0 * r.f_over_n);
    CHECK(r.corr_zz == -2.0 * r.f_over_n);
    CHECK(r.p == r.f_over_n / (1.0 + r.f_over_n));
    CHECK(r.f_over_n == doctest::Approx(0.75e-3 * r.f_n * r.f_n / table.y).epsilon(1e-14));
    CHECK(std::abs(r.f_n_normalized) <= 1.0);
  }
}

TEST_CASE("profile decays beyond ten screening lengths") {
  auto c = reference_sweep();
  c.x_min = 20000.0;
  c.x_max = 60000.0;
  c.points = 400;
  for (const auto& r : compute_profile(c).rows) CHECK(std::abs(r.f_n_normalized) < 0.1);
}

TEST_CASE("profile CSV round-trips 17 significant digits") {
  const auto table = compute_profile(reference_sweep());
  const std::string csv = format_profile(table, OutputFormat::Csv);
  std::stringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x[1/k_F],f_n[1],f_n_normalized[1],f_over_n[n],p[1],corr_zz[n],cond_lhs[1],g[1]");
  std::size_t i = 0;
  while (std::getline(in, line)) {
    const auto fields = split(line, ',');
    REQUIRE(fields.size() == 8);
    const auto& r = table.rows.at(i++);
    CHECK(std::strtod(fields[0].c_str(), nullptr) == r.x);
    CHECK(std::strtod(fields[1].c_str(), nullptr) == r.f_n);
    CHECK(std::strtod(fields[3].c_str(), nullptr) == r.f_over_n);
    CHECK(std::strtod(fields[7].c_str(), nullptr) == r.g);
  }
  CHECK(i == table.rows.size());
}

TEST_CASE("profile JSON carries the metadata") {
  const auto doc = json::parse(format_profile(compute_profile(reference_sweep()), OutputFormat::Json));
  CHECK(doc["meta"]["tool"] == "kondo_ent");
  CHECK(doc["meta"]["version"] == std::string(kToolVersion));
  CHECK(doc["meta"]["command"] == "profile");
  CHECK(doc["meta"]["params"]["cutoff_mode"] == "derived");
  CHECK(doc["meta"]["params"]["physical_regime"] == true);
  CHECK(doc["meta"]["params"]["xi_k"].get<double>() == doctest::Approx(2000.0));
  CHECK(doc["rows"].size() == 200);
  CHECK(doc["rows"][0]["f_n_normalized"].get<double>() == 1.0);
}

TEST_CASE("identical configs write identical bytes") {
  const auto dir = scratch_dir();
  for (auto format : {OutputFormat::Csv, OutputFormat::Json}) {
    auto c = reference_sweep();
    c.format = format;
    c.output_path = (dir / "a.out").string();
    cmd_profile(c);
    c.output_path = (dir / "b.out").string();
    cmd_profile(c);
    const auto a = slurp(dir / "a.out");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "b.out"));
  }
  auto c = reference_sweep();
  c.output_path = (dir / "missing" / "nested" / "x.csv").string();
  CHECK_THROWS_AS(cmd_profile(c), Error);
}

TEST_CASE("scan over the physical range finds no entanglement") {
  ScanConfig c;
  c.eb_list = {1e-2, 1e-3};
  c.d_list = {0.05, 0.3};
  c.points = 100;
  const auto r = run_scan(c);
  REQUIRE(r.cells.size() == 4);
  double max_cell = 0.0;
  for (const auto& cell : r.cells) {
    CHECK(cell.physical_regime);
    CHECK(cell.states == 100);
    CHECK(cell.entangled_states == 0);
    CHECK(cell.max_negativity == 0.0);
    CHECK(cell.max_concurrence == 0.0);
    CHECK(cell.x_max == doctest::Approx(10.0 * 2.0 / cell.eb_ratio));
    CHECK(cell.x_at_max == 0.0);
    max_cell = std::max(max_cell, cell.max_cond_lhs);
  }
  CHECK(r.global_max == max_cell);
  CHECK(r.global_max < 1.0);
  CHECK_FALSE(r.any_entangled);
  CHECK(r.entangled_states == 0);
  // The largest cell sits at eb = 1e-2, d = 0.3.
  CHECK(r.global_max == doctest::Approx(0.19424199991473123).epsilon(1e-10));

  const auto doc = json::parse(format_scan(r, OutputFormat::Json));
  CHECK(doc["any_entangled"] == false);
  CHECK(doc["cells"].size() == 4);
  CHECK(doc["meta"]["cutoff_mode"] == "derived");
}

TEST_CASE("scan errors and unphysical parameters") {
  ScanConfig c;
  c.eb_list = {};
  CHECK_THROWS_AS(run_scan(c), InvalidArgument);
  c = {};
  c.d_list = {};
  CHECK_THROWS_AS(run_scan(c), InvalidArgument);
  c = {};
  c.points = 1;
  CHECK_THROWS_AS(run_scan(c), InvalidArgument);
  c = {};
  c.eb_list = {-1e-3};
  CHECK_THROWS_AS(run_scan(c), InvalidArgument);

  c = {};
  c.eb_list = {10.0};
  c.d_list = {20.0};
  c.points = 20;
  const auto r = run_scan(c);
  REQUIRE(r.cells.size() == 1);
  CHECK_FALSE(r.cells[0].physical_regime);
  CHECK(std::isfinite(r.global_max));
  const std::string csv = format_scan(r, OutputFormat::Csv);
  CHECK(split(split(csv, '\n').at(1), ',').at(2) == "0");

  c.x_max = 50.0;
  CHECK(run_scan(c).cells[0].x_max == 50.0);
}

TEST_CASE("rho kinds") {
  const auto params = make_params(1e-3, 0.1);

  const auto imp = run_rho(RhoRequest{});
  CHECK(imp.entropy_bits == 1.0);
  CHECK(imp.raw.rows() == 2);
  CHECK_FALSE(imp.report.has_value());

  RhoRequest ic;
  ic.kind = RhoKind::ImpurityConduction;
  ic.params = params;
  ic.x = 0.0;
  const auto a = run_rho(ic);
  REQUIRE(a.report.has_value());
  CHECK_FALSE(a.report->entangled);
  REQUIRE(a.f_over_n.has_value());
  CHECK(*a.f_over_n == doctest::Approx(0.016435338618520782).epsilon(1e-11));
  CHECK(*a.report->condition_lhs == 2.0 * *a.f_over_n);
  CHECK(a.werner->residual <= 1e-12);
  CHECK(a.raw_units == "n");

  RhoRequest fr;
  fr.kind = RhoKind::Free;
  fr.x_rel = 1.0;  // g^2 = 0.816
  const auto b = run_rho(fr);
  CHECK(b.report->entangled);
  CHECK_FALSE(b.report->condition_lhs.has_value());
  CHECK(b.raw_units == "n^2/8");
  fr.x_rel = 3.0;
  CHECK_FALSE(run_rho(fr).report->entangled);

  RhoRequest co;
  co.kind = RhoKind::Conduction;
  co.params = params;
  co.x1 = 2.0;
  co.x2 = 2.5;
  co.x_rel = 1.0;
  const auto c = run_rho(co);
  CHECK(c.report->entangled);
  CHECK(std::abs(c.normalized.trace().real() - 1.0) <= 1e-14);

  const auto doc = json::parse(format_rho(c));
  CHECK(doc["kind"] == "conduction");
  CHECK(doc["basis"].size() == 4);
  CHECK(doc["matrix_raw"]["entries"].size() == 4);
  CHECK(doc["matrix_raw"]["entries"][1][2].size() == 2);
  CHECK(doc["report"]["entangled"] == true);
  CHECK(doc["report"]["condition_lhs"].is_null());
  CHECK(doc["meta"]["params"]["eb_ratio"] == 1e-3);
  CHECK(json::parse(format_rho(imp))["report"]["entropy_bits"] == 1.0);
}

TEST_CASE("rho geometry mismatches are usage errors") {
  const auto params = make_params(1e-3, 0.1);
  RhoRequest r;
  r.x = 1.0;
  CHECK_THROWS_AS(run_rho(r), InvalidArgument);

  r = {};
  r.kind = RhoKind::ImpurityConduction;
  r.params = params;
  CHECK_THROWS_AS(run_rho(r), InvalidArgument);
  r.x = 1.0;
  r.x_rel = 1.0;
  CHECK_THROWS_AS(run_rho(r), InvalidArgument);

  r = {};
  r.kind = RhoKind::Free;
  CHECK_THROWS_AS(run_rho(r), InvalidArgument);
  r.x_rel = 1.0;
  r.x1 = 1.0;
  CHECK_THROWS_AS(run_rho(r), InvalidArgument);

  r = {};
  r.kind = RhoKind::Conduction;
  r.params = params;
  r.x1 = 1.0;
  r.x_rel = 1.0;
  CHECK_THROWS_AS(run_rho(r), InvalidArgument);
  r.x2 = 5.0;  // violates the triangle inequality
  CHECK_THROWS_AS(run_rho(r), InvalidArgument);

  CHECK(parse_rho_kind("impurity-conduction") == RhoKind::ImpurityConduction);
  CHECK(to_string(RhoKind::Conduction) == "conduction");
  CHECK_THROWS_AS(parse_rho_kind("pair"), InvalidArgument);
}

TEST_CASE("oracle gate") {
  OracleConfig coarse{.params = make_params(1e-3, 0.1), .dk = 1.0 / 40.0};
  const auto r = run_oracle(coarse);
  CHECK_FALSE(r.passed);
  REQUIRE(r.rows.size() == 2 * coarse.xs.size() + 2);
  for (const auto& row : r.rows) {
    if (row.quantity == "g" && row.x == 0.0) {
      CHECK(row.rel_error == 0.0);
      CHECK(row.passed);
    }
    CHECK(row.passed == (row.rel_error <= coarse.gate));
  }
  CHECK(r.rows[r.rows.size() - 2].quantity == "norm");
  CHECK(r.rows.back().quantity == "norm_vs_paper-literal");
  CHECK_FALSE(r.rows.back().gated);

  const auto doc = json::parse(format_oracle(r, OutputFormat::Json));
  CHECK(doc["passed"] == false);
  CHECK(doc["meta"]["lattice"]["dk"] == 1.0 / 40.0);

  OracleConfig loose = coarse;
  loose.gate = 0.5;
  CHECK(run_oracle(loose).passed);

  OracleConfig bad = coarse;
  bad.xs = {};
  CHECK_THROWS_AS(run_oracle(bad), InvalidArgument);
  bad = coarse;
  bad.gate = 0.0;
  CHECK_THROWS_AS(run_oracle(bad), InvalidArgument);
}

TEST_CASE("relative error") {
  CHECK(relative_error(1.0, 1.0) == 0.0);
  CHECK(relative_error(1.1, 1.0) == doctest::Approx(0.1));
  CHECK(relative_error(0.0, 0.0) == 0.0);
  CHECK(relative_error(1e-300, 0.0) == std::numeric_limits<double>::infinity());
}
