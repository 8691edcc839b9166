// kondo_ent: screening-cloud kernels, reduced density matrices and
// entanglement measures of the Yosida Kondo ground state.
//
// Exit codes: 0 success, 1 usage, 2 numerical failure, 3 gate failure.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kondo/commands.hpp"
#include "kondo/error.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitGate = 3;

// Reads a flat key=value file ('#' comments, blank lines ignored) into
// "--key=value" arguments.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kondo::InvalidArgument("cannot read config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw kondo::InvalidArgument(path + ":" + std::to_string(number) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw kondo::InvalidArgument(path + ":" + std::to_string(number) + ": empty key");
    args.push_back("--" + (key.rfind("--", 0) == 0 ? key.substr(2) : key) + "=" + trim(line.substr(eq + 1)));
  }
  return args;
}

// Splices config-file arguments in right after the subcommand. A key also
// given on the command line is dropped so that list options are replaced,
// not extended.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!path || rest.empty()) return rest;
  std::vector<std::string> out{rest.front()};
  const auto flag_of = [](const std::string& a) { return a.substr(0, a.find('=')); };
  for (auto& a : read_config(*path)) {
    const bool overridden = std::any_of(rest.begin() + 1, rest.end(),
                                        [&](const std::string& r) { return flag_of(r) == flag_of(a); });
    if (!overridden) out.push_back(std::move(a));
  }
  out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

struct ModelOptions {
  double eb_ratio = 1e-3;
  double d_ratio = 0.1;
  std::string cutoff_mode = "derived";

  void add_to(CLI::App* app) {
    app->add_option("--eb-ratio", eb_ratio, "E_B/E_F = k_B T_K / E_F")->capture_default_str();
    app->add_option("--d-ratio", d_ratio, "D/E_F, half-bandwidth over Fermi energy")->capture_default_str();
    app->add_option("--cutoff-mode", cutoff_mode, "Upper integration limit: derived (D/E_B) or paper-literal (D/E_F)")
        ->check(CLI::IsMember({"derived", "paper-literal"}))
        ->capture_default_str();
  }
  kondo::ModelParams build() const {
    return kondo::make_params(eb_ratio, d_ratio, kondo::parse_cutoff_mode(cutoff_mode));
  }
};

}  // namespace

int main(int argc, char** argv) {
  namespace cli = kondo::cli;

  CLI::App app{"Entanglement structure of the single-impurity Kondo model (Yosida ground state)",
               std::string(cli::kToolName)};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key=value file supplying any flag of the subcommand");

  std::string format = "csv";
  std::string out = "-";
  auto add_output = [&](CLI::App* sub, bool with_format) {
    if (with_format) sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out, "Output path, '-' for stdout")->capture_default_str();
  };

  // profile
  auto* profile = app.add_subcommand("profile", "Kernel profile f_n, f/n, p, correlations and g over a radial grid");
  ModelOptions profile_model;
  profile_model.add_to(profile);
  double x_min = 0.0;
  double x_max = 100.0;
  std::size_t points = 1000;
  std::string spacing = "linear";
  profile->add_option("--x-min", x_min, "Smallest k_F r")->capture_default_str();
  profile->add_option("--x-max", x_max, "Largest k_F r")->capture_default_str();
  profile->add_option("--points", points, "Number of grid points (>= 2)")->capture_default_str();
  profile->add_option("--spacing", spacing, "linear or log")->check(CLI::IsMember({"linear", "log"}));
  add_output(profile, true);

  // scan
  auto* scan = app.add_subcommand("scan", "Maximum of the entanglement-condition LHS over a parameter grid");
  cli::ScanConfig scan_config;
  std::string scan_cutoff = "derived";
  std::optional<double> scan_x_max;
  scan->add_option("--eb-list", scan_config.eb_list, "E_B/E_F values")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  scan->add_option("--d-list", scan_config.d_list, "D/E_F values")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  scan->add_option("--cutoff-mode", scan_cutoff, "derived or paper-literal")
      ->check(CLI::IsMember({"derived", "paper-literal"}));
  scan->add_option("--x-max-xi", scan_config.x_max_xi, "Largest k_F r in units of xi_K k_F")->capture_default_str();
  scan->add_option("--x-max", scan_x_max, "Largest k_F r (overrides --x-max-xi)");
  scan->add_option("--points", scan_config.points, "Grid points per parameter pair")->capture_default_str();
  add_output(scan, true);

  // rho
  auto* rho = app.add_subcommand("rho", "Dump a reduced density matrix with its entanglement report (JSON)");
  ModelOptions rho_model;
  rho_model.add_to(rho);
  std::string kind;
  std::optional<double> rx, rx1, rx2, rxrel;
  rho->add_option("--kind", kind, "impurity, impurity-conduction, free or conduction")
      ->required()
      ->check(CLI::IsMember({"impurity", "impurity-conduction", "free", "conduction"}));
  rho->add_option("--x", rx, "k_F r of the conduction electron (impurity-conduction)");
  rho->add_option("--x1", rx1, "k_F r_1 (conduction)");
  rho->add_option("--x2", rx2, "k_F r_2 (conduction)");
  rho->add_option("--x-rel", rxrel, "k_F |r_1 - r_2| (free, conduction)");
  add_output(rho, false);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Compare continuum kernels against brute-force lattice sums");
  ModelOptions oracle_model;
  oracle_model.add_to(oracle);
  cli::OracleConfig oracle_defaults{.params = kondo::make_params(1e-3, 0.1)};
  std::vector<double> oracle_xs = oracle_defaults.xs;
  std::optional<double> dk;
  double gate = oracle_defaults.gate;
  oracle->add_option("--x-list", oracle_xs, "k_F r values")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  oracle->add_option("--dk", dk, "Lattice spacing over k_F (default 1/640)");
  oracle->add_option("--gate", gate, "Maximum accepted relative error")->capture_default_str();
  add_output(oracle, true);

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const kondo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const auto fmt_choice = cli::parse_format(format);
    if (*profile) {
      cli::SweepConfig config{profile_model.build(), x_min, x_max, points, cli::parse_spacing(spacing), fmt_choice, out};
      cli::cmd_profile(config);
    } else if (*scan) {
      scan_config.cutoff_mode = kondo::parse_cutoff_mode(scan_cutoff);
      scan_config.x_max = scan_x_max;
      scan_config.format = fmt_choice;
      scan_config.output_path = out;
      const auto result = cli::cmd_scan(scan_config);
      std::cerr << "global_max cond_lhs = " << result.global_max
                << (result.any_entangled ? " (entangled states found)" : " (no entanglement)") << "\n";
    } else if (*rho) {
      cli::RhoRequest request;
      request.kind = cli::parse_rho_kind(kind);
      if (request.kind == cli::RhoKind::ImpurityConduction || request.kind == cli::RhoKind::Conduction)
        request.params = rho_model.build();
      request.x = rx;
      request.x1 = rx1;
      request.x2 = rx2;
      request.x_rel = rxrel;
      request.output_path = out;
      cli::cmd_rho(request);
    } else if (*oracle) {
      cli::OracleConfig config{.params = oracle_model.build()};
      config.xs = oracle_xs;
      config.dk = dk;
      config.gate = gate;
      config.format = fmt_choice;
      config.output_path = out;
      const auto report = cli::cmd_oracle(config);
      if (!report.passed) {
        std::cerr << "oracle gate failed: relative error above " << gate << "\n";
        return kExitGate;
      }
    }
  } catch (const kondo::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const kondo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
