#pragma once

#include "srpulse/config.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace srpulse {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Sampled time series of one run. columns[0] is "time"; the remaining
/// columns appear in this order when present:
///   jx, jy, jz                   moments
///   jx_se, jy_se, jz_se          moments, trajectories backend
///   chi2, c2, c3, cn<order>      the requested measures
///   fidelity                     master backend, <J,-J|rho|J,-J>
struct RunResult {
  RunConfig config;  // with "auto" fields resolved
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> files;

  /// Column by name; throws std::out_of_range if absent.
  std::vector<double> column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

/// Fill in t_end = "auto" (five mean-field equator-crossing times) and
/// t_pulse = "auto" (peak C_3 of a fixed-rate pre-pass at the pre-quench
/// rates).
RunConfig resolve_auto(const RunConfig& config);

/// Run one configuration, writing <prefix>.csv, <prefix>_summary.json,
/// Q-function snapshots and optional per-trajectory output into
/// config.output_dir unless write_files is false. Throws on failure.
RunResult execute(const RunConfig& config, bool write_files = true);

/// execute() with errors mapped to exit codes and reported on `log`.
int run(const RunConfig& config, std::ostream& log);

struct SweepPoint {
  int n_atoms = 0;
  double omega = 0.0;
  double max_c2_norm = 0.0;  // max_t C_2 / N^2
  double max_c3_norm = 0.0;  // max_t C_3 / N^3
  bool ok = false;
  std::string error;
};

struct SlopeFit {
  double omega = 0.0;
  double slope_c2 = 0.0;
  double slope_c3 = 0.0;
  std::size_t points = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<SlopeFit> slopes;
  std::vector<std::string> files;
  bool all_ok() const;
};

/// Master-backend runs over the (N, omega) grid in parallel. Finished points
/// are appended to a JSON-lines checkpoint and skipped on a rerun; failed
/// points are recorded and the sweep continues.
SweepResult execute_sweep(const SweepConfig& config, bool write_files = true);
int sweep(const SweepConfig& config, std::ostream& log);

struct Peak {
  double time = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

Peak find_peak(const std::vector<double>& times, const std::vector<double>& values);

/// Time from the peak until the series first falls to half the peak value,
/// linearly interpolated; empty if it never does.
std::optional<double> half_life(const std::vector<double>& times, const std::vector<double>& values);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Write rows as CSV with a header line and "%.17g" numbers.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

}  // namespace srpulse
