#pragma once

#include "srpulse/schedule.hpp"
#include "srpulse/spin_algebra.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace srpulse {

/// Running integrals A(t) = int a dt and B(t) = int g dt of the twist and
/// decay rates from t0. Closed form for fixed rates; for a schedule,
/// 8-point Gauss-Legendre on panels no wider than max_panel that never
/// straddle a breakpoint.
class RateIntegrals {
 public:
  RateIntegrals(const Drive& drive, double t0, double t_end, double max_panel);

  double twist(double t) const;
  double decay(double t) const;
  /// Earliest t in [t_lo, t_end] with decay(t) >= b, or +inf.
  double time_at_decay(double b, double t_lo) const;

 private:
  std::array<double, 2> panel_integral(double a, double b) const;
  std::array<double, 2> integral_to(double t) const;

  Drive drive_;
  bool constant_;
  double t0_, t_end_;
  std::vector<double> nodes_;
  std::vector<std::array<double, 2>> cumulative_;
};

struct TrajectoryConfig {
  std::size_t n_trajectories = 1;
  std::uint64_t master_seed = 0;
  /// Panel width cap for the drive integrals (schedules only).
  double dt_max = std::numeric_limits<double>::infinity();
  /// Relative accuracy of norm^2 at the located jump.
  double jump_tolerance = 1e-9;
  std::vector<double> sample_times;
  bool record_second_moments = false;
  bool record_states = false;
  /// Keep every TrajectoryRecord in the ensemble result.
  bool keep_records = false;
};

struct TrajectoryRecord {
  std::size_t index = 0;
  std::vector<double> times;
  /// <J_x>, <J_y>, <J_z> of the normalized state at each sample.
  std::vector<std::array<double, 3>> first;
  /// Symmetrized second moments (xx, xy, xz, yy, yz, zz) if requested.
  std::vector<std::array<double, 6>> second;
  /// Normalized states if requested.
  std::vector<DickeVector> states;
  std::vector<double> jump_times;
};

/// One Monte-Carlo wave-function trajectory of the master equation with jump
/// operator sqrt(2 eta lambda^2/N) J_-. Between jumps the state follows
/// H_eff = H - i(eta lambda^2/N) J_+J_-, which is diagonal, so the
/// unnormalized state is known in closed form given A(t) and B(t); the jump
/// fires when its squared norm falls to a uniform threshold drawn from the
/// stream (master_seed, index).
/// Throws ConfigError if psi0 is not normalized, NumericalError if a
/// threshold falls below the 1e-12 norm floor.
TrajectoryRecord run_trajectory(const DickeVector& psi0, const Drive& drive, double t0,
                                const TrajectoryConfig& config, std::size_t index);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<std::array<double, 3>> mean;
  std::vector<std::array<double, 3>> standard_error;
  std::vector<std::array<double, 6>> second_mean;
  std::vector<std::array<double, 6>> second_standard_error;
  /// Trajectory average of |psi><psi| per sample, if states were recorded.
  std::vector<DensityMatrix> density;
  std::vector<std::size_t> jump_counts;
  std::vector<TrajectoryRecord> records;
};

/// Run config.n_trajectories trajectories on `threads` workers (0 = all
/// cores) and reduce them in index order; the result does not depend on the
/// worker count. Standard errors use the sample standard deviation.
/// Failures are rethrown as NumericalError naming the trajectory index.
EnsembleResult ensemble_average(const DickeVector& psi0, const Drive& drive, double t0,
                                const TrajectoryConfig& config, unsigned threads = 0);

}  // namespace srpulse
