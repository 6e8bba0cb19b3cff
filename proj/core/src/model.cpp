#include "srpulse/model.hpp"

#include "srpulse/errors.hpp"

#include <cmath>
#include <string>

namespace srpulse {

ModelParams ModelParams::create(int n_atoms, double kappa, double omega, double lambda) {
  if (n_atoms < 1) {
    throw ConfigError("n_atoms must be >= 1, got " + std::to_string(n_atoms));
  }
  if (!std::isfinite(kappa) || !std::isfinite(omega) || !std::isfinite(lambda)) {
    throw ConfigError("model rates must be finite");
  }
  if (kappa < 0.0) throw ConfigError("kappa must be >= 0");
  if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
  if (kappa * kappa + omega * omega <= 0.0) {
    throw ConfigError("kappa^2 + omega^2 must be positive (xi, eta undefined)");
  }
  return ModelParams(n_atoms, kappa, omega, lambda);
}

ModelParams::ModelParams(int n, double kappa, double omega, double lambda)
    : n_atoms_(n), kappa_(kappa), omega_(omega), lambda_(lambda) {
  const double denom = kappa * kappa + omega * omega;
  xi_ = omega / denom;
  eta_ = kappa / denom;
}

}  // namespace srpulse
