#pragma once

#include "srpulse/schedule.hpp"
#include "srpulse/spin_algebra.hpp"

namespace srpulse {

struct CorrelationPeak {
  double time = 0.0;
  double c3 = 0.0;
};

/// Master-equation pre-pass at fixed rates; returns the sampled time of
/// maximal C_3 on a uniform grid of n_samples points over [0, t_end].
/// Used to place t_pulse of a quench at the correlation peak.
CorrelationPeak peak_correlation_time(const DickeVector& psi0, const ModelParams& params,
                                      double t_end, int n_samples = 401, double tol = 1e-8);

/// Mean-field estimate of the pulse duration: `factor` times the time at
/// which theta(t) reaches the equator. Throws ConfigError if it never does
/// (theta0 >= pi/2, or no decay).
double meanfield_pulse_duration(double theta0, const ModelParams& params, double factor = 5.0);

}  // namespace srpulse
