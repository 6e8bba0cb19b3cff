#pragma once

#include "srpulse/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace srpulse {

struct ScenarioInfo {
  std::string name;
  std::string description;
};

/// Built-in presets: fig1c, fig2-dissipative, fig2-dispersive, fig2-unitary,
/// fig3, fig4, fig5.
const std::vector<ScenarioInfo>& scenario_list();

struct ScenarioOptions {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<double> tol;
};

/// The runs (and, for fig4, the sweep) a preset consists of, with the
/// options applied. Throws ConfigError for an unknown name.
struct ScenarioPlan {
  std::vector<RunConfig> runs;
  std::optional<SweepConfig> sweep;
};
ScenarioPlan scenario_plan(const std::string& name, const ScenarioOptions& options);

/// Execute a preset, writing each run's files plus the merged tables
/// (fig3_jx.csv, fig5_c3.csv) and their summaries into options.out_dir.
int run_scenario(const std::string& name, const ScenarioOptions& options, std::ostream& log);

}  // namespace srpulse
