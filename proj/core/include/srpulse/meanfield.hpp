#pragma once

#include "srpulse/schedule.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace srpulse {

/// Mean spin direction on the Bloch sphere of radius 1/2. phi is kept
/// unwrapped during integration.
struct BlochAngles {
  double theta = 0.0;
  double phi = 0.0;
};

struct AngleRates {
  double dtheta = 0.0;
  double dphi = 0.0;
};

/// dtheta/dt = eta lambda^2 sin(theta), dphi/dt = xi lambda^2 cos(theta).
AngleRates meanfield_rhs(const BlochAngles& angles, const ModelParams& params);

/// Inversion-dependent Rabi frequency 2 xi lambda^2 gamma with gamma = <J_z>/N.
/// Throws ConfigError for |gamma| > 1/2.
double rabi_frequency(double gamma, const ModelParams& params);

/// (<J_x>, <J_y>, <J_z>) / N for a pure mean-field state, i.e. r = 1/2.
std::array<double, 3> bloch_vector(const BlochAngles& angles);

struct MeanFieldTrajectory {
  std::vector<double> times;
  std::vector<BlochAngles> angles;

  std::size_t size() const { return times.size(); }
  std::array<double, 3> bloch(std::size_t i) const { return bloch_vector(angles[i]); }
};

/// Integrate the angle equations from (t0, initial) and report the state at
/// each sample time. Interior polar angles are clamped to
/// [1e-14, pi - 1e-14] initially; exact poles are fixed points.
/// Throws IntegrationError on step-size underflow.
MeanFieldTrajectory integrate_meanfield(const BlochAngles& initial, const Drive& drive, double t0,
                                        std::span<const double> sample_times,
                                        double tol = 1e-9);

/// Time at which theta crosses pi/2, by cubic inverse interpolation around
/// the first sign change of theta - pi/2. Empty if there is no crossing.
std::optional<double> equator_crossing_time(const MeanFieldTrajectory& trajectory);

}  // namespace srpulse
