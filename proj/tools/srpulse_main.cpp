// Command line front end: run, sweep and scenario subcommands.
#include "srpulse/config.hpp"
#include "srpulse/runner.hpp"
#include "srpulse/scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> tol;
};

void apply(srpulse::RunConfig& cfg, const Overrides& o) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.threads) cfg.threads = *o.threads;
  if (o.tol) cfg.tol = *o.tol;
}

template <class T>
bool report(const srpulse::Validated<T>& v) {
  for (const auto& e : v.errors) std::cerr << "config: " << e << "\n";
  return v.ok();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"srpulse: dispersive superradiant pulse simulator"};
  app.require_subcommand(0, 1);

  Overrides overrides;
  bool list = false;
  app.add_option("--seed", overrides.seed, "Override the random seed");
  app.add_option("--threads", overrides.threads, "Worker threads (0 = all cores)");
  app.add_option("--tol", overrides.tol, "Override the integration tolerance")->check(CLI::Range(1e-14, 1e-2));
  app.add_flag("--list-scenarios", list, "List built-in scenarios and exit");

  std::string run_path;
  auto* run_cmd = app.add_subcommand("run", "Run one JSON configuration");
  run_cmd->add_option("config", run_path, "Configuration file")->required();
  bool dump = false;
  run_cmd->add_flag("--print-config", dump, "Print the normalized configuration and exit");

  std::string sweep_path;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep configuration");
  sweep_cmd->add_option("config", sweep_path, "Sweep configuration file")->required();

  std::string scenario_name;
  std::string out_dir = srpulse::default_output_dir();
  auto* scen_cmd = app.add_subcommand("scenario", "Regenerate a figure's data");
  scen_cmd->add_option("name", scenario_name, "Scenario name")->required();
  scen_cmd->add_option("--out", out_dir, "Output directory (default $SRPULSE_OUTPUT_DIR or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : srpulse::kExitConfig;
  }

  if (list) {
    for (const auto& s : srpulse::scenario_list()) std::cout << s.name << "\t" << s.description << "\n";
    return 0;
  }

  if (*run_cmd) {
    const auto text = read_file(run_path);
    if (!text) {
      std::cerr << "cannot read " << run_path << "\n";
      return srpulse::kExitConfig;
    }
    auto v = srpulse::validate_config(*text);
    if (!report(v)) return srpulse::kExitConfig;
    apply(*v.value, overrides);
    if (dump) {
      std::cout << srpulse::normalized_json(*v.value) << "\n";
      return 0;
    }
    return srpulse::run(*v.value, std::cerr);
  }
  if (*sweep_cmd) {
    const auto text = read_file(sweep_path);
    if (!text) {
      std::cerr << "cannot read " << sweep_path << "\n";
      return srpulse::kExitConfig;
    }
    auto v = srpulse::validate_sweep_config(*text);
    if (!report(v)) return srpulse::kExitConfig;
    apply(v.value->base, overrides);
    if (overrides.threads) v.value->parallelism = *overrides.threads;
    return srpulse::sweep(*v.value, std::cerr);
  }
  if (*scen_cmd) {
    srpulse::ScenarioOptions opt;
    opt.out_dir = out_dir;
    opt.seed = overrides.seed;
    opt.threads = overrides.threads;
    opt.tol = overrides.tol;
    return srpulse::run_scenario(scenario_name, opt, std::cerr);
  }
  std::cout << app.help();
  return 0;
}
