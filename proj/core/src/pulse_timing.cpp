#include "srpulse/pulse_timing.hpp"

#include "srpulse/errors.hpp"
#include "srpulse/lindblad.hpp"
#include "srpulse/observables.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace srpulse {

CorrelationPeak peak_correlation_time(const DickeVector& psi0, const ModelParams& params,
                                      double t_end, int n_samples, double tol) {
  if (!(t_end > 0.0) || n_samples < 2) {
    throw ConfigError("peak_correlation_time: need t_end > 0 and at least two samples");
  }
  std::vector<double> times(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) times[static_cast<std::size_t>(i)] = t_end * i / (n_samples - 1);
  CorrelationPeak best;
  EvolveOptions opts;
  opts.tol = tol;
  evolve(projector(psi0), params, 0.0, times,
         [&best](double t, const DensityMatrix& rho) {
           const double c3 = c_total(rho, 3);
           if (c3 > best.c3) best = {t, c3};
         },
         opts);
  return best;
}

double meanfield_pulse_duration(double theta0, const ModelParams& params, double factor) {
  const double rate = params.eta() * params.lambda() * params.lambda();
  if (!(theta0 > 0.0 && theta0 < 0.5 * std::numbers::pi) || !(rate > 0.0)) {
    throw ConfigError("automatic end time needs 0 < theta0 < pi/2 and a nonzero decay rate");
  }
  // tan(theta/2) = tan(theta0/2) e^{rate t} reaches 1 at the equator.
  return factor * std::log(1.0 / std::tan(0.5 * theta0)) / rate;
}

}  // namespace srpulse
