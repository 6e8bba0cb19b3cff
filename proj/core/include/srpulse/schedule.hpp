#pragma once

#include "srpulse/model.hpp"

#include <variant>
#include <vector>

namespace srpulse {

/// Piecewise-linear quench of (omega, lambda): a dispersive stage at
/// (omega_max, lambda_max), a linear ramp over [t_pulse - t_ramp, t_pulse],
/// then a stage at (omega_min, lambda_min). t_ramp == 0 is a step at t_pulse.
class RampSchedule {
 public:
  struct Spec {
    int n_atoms = 1;
    double kappa = 1.0;
    double omega_max = 0.0;
    double omega_min = 0.0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    double t_pulse = 0.0;
    double t_ramp = 0.0;
  };

  /// Throws ConfigError when 0 <= t_ramp <= t_pulse, lambda >= 0, or
  /// kappa^2 + omega(t)^2 > 0 is violated anywhere on the ramp.
  static RampSchedule create(const Spec& spec);

  const Spec& spec() const { return spec_; }
  int n_atoms() const { return spec_.n_atoms; }

  double omega_at(double t) const;
  double lambda_at(double t) const;
  /// Parameters at time t >= 0 with xi, eta recomputed from (kappa, omega(t)).
  ModelParams params_at(double t) const;

  /// Start and end of the ramp; the right-hand side is only piecewise smooth.
  std::vector<double> breakpoints() const;

  bool operator==(const RampSchedule&) const = default;

 private:
  explicit RampSchedule(const Spec& s) : spec_(s) {}
  double ramp_fraction(double t) const;

  Spec spec_;
};

/// Parameter source for every backend: fixed rates or a quench schedule.
using Drive = std::variant<ModelParams, RampSchedule>;

ModelParams params_at(const Drive& drive, double t);
std::vector<double> breakpoints(const Drive& drive);
int n_atoms(const Drive& drive);

}  // namespace srpulse
