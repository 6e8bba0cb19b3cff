#include "srpulse/schedule.hpp"

#include "srpulse/errors.hpp"

#include <cmath>
#include <string>

namespace srpulse {

RampSchedule RampSchedule::create(const Spec& s) {
  if (s.n_atoms < 1) throw ConfigError("schedule: n_atoms must be >= 1");
  for (double v : {s.kappa, s.omega_max, s.omega_min, s.lambda_max, s.lambda_min, s.t_pulse,
                   s.t_ramp}) {
    if (!std::isfinite(v)) throw ConfigError("schedule: all fields must be finite");
  }
  if (s.kappa < 0.0) throw ConfigError("schedule: kappa must be >= 0");
  if (s.t_ramp < 0.0) throw ConfigError("schedule: t_ramp must be >= 0");
  if (s.t_ramp > s.t_pulse) throw ConfigError("schedule: t_ramp must not exceed t_pulse");
  if (s.lambda_max < 0.0 || s.lambda_min < 0.0) {
    throw ConfigError("schedule: lambda_max and lambda_min must be >= 0");
  }
  // omega(t) sweeps [omega_min, omega_max]; with kappa = 0 it must avoid 0.
  if (s.kappa == 0.0) {
    const bool crosses_zero = (s.omega_max <= 0.0 && s.omega_min >= 0.0) ||
                              (s.omega_max >= 0.0 && s.omega_min <= 0.0);
    if (crosses_zero) {
      throw ConfigError("schedule: kappa = 0 requires omega(t) != 0 throughout (xi, eta undefined)");
    }
  }
  return RampSchedule(s);
}

double RampSchedule::ramp_fraction(double t) const {
  if (t < 0.0) throw ConfigError("schedule: time must be >= 0, got " + std::to_string(t));
  const double start = spec_.t_pulse - spec_.t_ramp;
  if (t < start) return 0.0;
  if (t >= spec_.t_pulse) return 1.0;
  return (t - start) / spec_.t_ramp;
}

double RampSchedule::omega_at(double t) const {
  const double f = ramp_fraction(t);
  return std::lerp(spec_.omega_max, spec_.omega_min, f);
}

double RampSchedule::lambda_at(double t) const {
  const double f = ramp_fraction(t);
  return std::lerp(spec_.lambda_max, spec_.lambda_min, f);
}

ModelParams RampSchedule::params_at(double t) const {
  return ModelParams::create(spec_.n_atoms, spec_.kappa, omega_at(t), lambda_at(t));
}

std::vector<double> RampSchedule::breakpoints() const {
  if (spec_.t_ramp == 0.0) return {spec_.t_pulse};
  return {spec_.t_pulse - spec_.t_ramp, spec_.t_pulse};
}

ModelParams params_at(const Drive& drive, double t) {
  if (const auto* p = std::get_if<ModelParams>(&drive)) return *p;
  return std::get<RampSchedule>(drive).params_at(t);
}

std::vector<double> breakpoints(const Drive& drive) {
  if (const auto* s = std::get_if<RampSchedule>(&drive)) return s->breakpoints();
  return {};
}

int n_atoms(const Drive& drive) {
  if (const auto* p = std::get_if<ModelParams>(&drive)) return p->n_atoms();
  return std::get<RampSchedule>(drive).n_atoms();
}

}  // namespace srpulse
