#pragma once

#include "srpulse/schedule.hpp"
#include "srpulse/spin_algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace srpulse {

enum class Backend { MeanField, Cumulant2, Master, Trajectories };
enum class Observable { Moments, Chi2, C2, C3, Cn, QFunction };

std::string to_string(Backend b);
std::string to_string(Observable o);

struct InitialState {
  double theta = 0.0;
  double phi = 0.0;
  /// Explicit Dicke amplitudes; overrides (theta, phi) when non-empty.
  std::vector<cplx> amplitudes;
};

struct QFunctionSettings {
  std::vector<double> times;
  /// 0 selects the default 2N+1 x 2N+2 grid.
  int n_theta = 0;
  int n_phi = 0;
};

struct TrajectorySettings {
  std::size_t count = 100;
  double jump_tolerance = 1e-9;
  /// Write every trajectory's first moments to <prefix>_trajectories.csv.
  bool per_trajectory_output = false;
};

struct RunConfig {
  Backend backend = Backend::Master;
  Drive drive = ModelParams::create(1, 1.0, 0.0, 0.0);
  /// Schedule given with "t_pulse": "auto"; resolved before running.
  bool t_pulse_auto = false;
  InitialState initial;
  double t_start = 0.0;
  /// Negative until resolved when "t_end": "auto".
  double t_end = 0.0;
  bool t_end_auto = false;
  int samples = 201;
  std::vector<Observable> observables = {Observable::Moments};
  int cn_order = 3;
  bool c2_symmetrized = false;
  QFunctionSettings qfunction;
  TrajectorySettings trajectories;
  std::string output_dir = ".";
  std::string output_prefix = "run";
  std::uint64_t seed = 0;
  double tol = 1e-8;
  double trace_drift_limit = 1e-6;
  bool check_positivity = false;
  unsigned threads = 0;

  bool wants(Observable o) const;
  int n_atoms() const { return srpulse::n_atoms(drive); }
  std::vector<double> sample_times() const;
};

struct SweepConfig {
  RunConfig base;
  std::vector<int> n_values;
  std::vector<double> omega_values;
  bool reduce_c2 = true;
  bool reduce_c3 = true;
  unsigned parallelism = 0;
  /// Empty selects <output_dir>/<prefix>_checkpoint.jsonl.
  std::string checkpoint;
};

template <class T>
struct Validated {
  std::optional<T> value;
  std::vector<std::string> errors;
  bool ok() const { return value.has_value(); }
};

/// Parse and validate a run configuration; every problem is collected with
/// its JSON path rather than stopping at the first.
Validated<RunConfig> validate_config(std::string_view text);
Validated<SweepConfig> validate_sweep_config(std::string_view text);

/// Canonical JSON with all defaults filled in.
std::string normalized_json(const RunConfig& config);
std::string normalized_json(const SweepConfig& config);

/// $SRPULSE_OUTPUT_DIR if set and non-empty, else ".".
std::string default_output_dir();

/// Initial state vector of a run.
DickeVector initial_state(const RunConfig& config);

}  // namespace srpulse
