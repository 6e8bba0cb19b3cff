#include "srpulse/meanfield.hpp"

#include "srpulse/errors.hpp"
#include "srpulse/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace srpulse {

namespace {
constexpr double kPoleGuard = 1e-14;
}

AngleRates meanfield_rhs(const BlochAngles& angles, const ModelParams& params) {
  const double l2 = params.lambda() * params.lambda();
  return {params.eta() * l2 * std::sin(angles.theta), params.xi() * l2 * std::cos(angles.theta)};
}

double rabi_frequency(double gamma, const ModelParams& params) {
  if (!(std::abs(gamma) <= 0.5)) throw ConfigError("rabi_frequency: |gamma| must be <= 1/2");
  return 2.0 * params.xi() * params.lambda() * params.lambda() * gamma;
}

std::array<double, 3> bloch_vector(const BlochAngles& a) {
  constexpr double r = 0.5;
  return {r * std::sin(a.theta) * std::cos(a.phi), r * std::sin(a.theta) * std::sin(a.phi),
          r * std::cos(a.theta)};
}

MeanFieldTrajectory integrate_meanfield(const BlochAngles& initial, const Drive& drive, double t0,
                                        std::span<const double> sample_times, double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) throw ConfigError("integrate_meanfield: tol must be in (0, 1e-2]");
  if (!(initial.theta >= 0.0 && initial.theta <= std::numbers::pi)) {
    throw ConfigError("integrate_meanfield: theta must lie in [0, pi]");
  }
  BlochAngles start = initial;
  const bool at_pole = start.theta == 0.0 || start.theta == std::numbers::pi;
  if (!at_pole) start.theta = std::clamp(start.theta, kPoleGuard, std::numbers::pi - kPoleGuard);

  MeanFieldTrajectory out;
  out.times.reserve(sample_times.size());
  out.angles.reserve(sample_times.size());

  auto rhs = [&drive](double t, const Eigen::Vector2d& y, Eigen::Vector2d& dy) {
    const auto r = meanfield_rhs({y[0], y[1]}, params_at(drive, t));
    dy[0] = r.dtheta;
    dy[1] = r.dphi;
  };
  // Local tolerance tightened so the global error stays within 10 tol.
  StepControl control;
  control.rtol = 0.05 * tol;
  control.atol = 0.05 * tol;
  const auto bps = breakpoints(drive);
  integrate_samples<Eigen::Vector2d>(
      rhs, t0, Eigen::Vector2d(start.theta, start.phi), sample_times, bps, control,
      [&out](double t, const Eigen::Vector2d& y) {
        out.times.push_back(t);
        out.angles.push_back({std::clamp(y[0], 0.0, std::numbers::pi), y[1]});
      });
  return out;
}

std::optional<double> equator_crossing_time(const MeanFieldTrajectory& tr) {
  constexpr double half_pi = 0.5 * std::numbers::pi;
  const std::size_t n = tr.size();
  if (n == 0) return std::nullopt;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = tr.angles[i].theta - half_pi;
    if (d == 0.0) return tr.times[i];
    if (i + 1 < n && (d < 0.0) != (tr.angles[i + 1].theta - half_pi < 0.0)) {
      // Lagrange interpolation of t as a function of theta through up to
      // four samples bracketing the sign change.
      const std::size_t lo = i >= 1 ? i - 1 : 0;
      const std::size_t hi = std::min(n - 1, lo + 3);
      const std::size_t first = hi >= 3 ? std::min(lo, hi - 3) : 0;
      double t_star = 0.0;
      for (std::size_t a = first; a <= hi; ++a) {
        double w = tr.times[a];
        for (std::size_t b = first; b <= hi; ++b) {
          if (b == a) continue;
          const double denom = tr.angles[a].theta - tr.angles[b].theta;
          if (denom == 0.0) return 0.5 * (tr.times[i] + tr.times[i + 1]);
          w *= (half_pi - tr.angles[b].theta) / denom;
        }
        t_star += w;
      }
      return std::clamp(t_star, tr.times[i], tr.times[i + 1]);
    }
  }
  return std::nullopt;
}

}  // namespace srpulse
