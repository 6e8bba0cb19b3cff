#pragma once

#include <cstdint>

namespace srpulse {

/// Rates of the cavity-eliminated model. Only (N, kappa, omega, lambda) are
/// free; the dispersive and dissipative coefficients are derived:
///   xi  = omega / (kappa^2 + omega^2)
///   eta = kappa / (kappa^2 + omega^2)
/// The engine is unit-agnostic; the presets use kappa = 1.
class ModelParams {
 public:
  /// Throws ConfigError if n_atoms < 1, kappa < 0, lambda < 0 or
  /// kappa^2 + omega^2 == 0.
  static ModelParams create(int n_atoms, double kappa, double omega, double lambda);

  int n_atoms() const { return n_atoms_; }
  double kappa() const { return kappa_; }
  double omega() const { return omega_; }
  double lambda() const { return lambda_; }
  double xi() const { return xi_; }
  double eta() const { return eta_; }

  double spin_length() const { return 0.5 * n_atoms_; }

  /// Coefficient xi*lambda^2/N in front of the twisting Hamiltonian.
  double twist_rate() const { return xi_ * lambda_ * lambda_ / n_atoms_; }
  /// Coefficient eta*lambda^2/N in front of the collective dissipator.
  double decay_rate() const { return eta_ * lambda_ * lambda_ / n_atoms_; }

  bool operator==(const ModelParams&) const = default;

 private:
  ModelParams(int n, double kappa, double omega, double lambda);

  int n_atoms_ = 1;
  double kappa_ = 1.0;
  double omega_ = 0.0;
  double lambda_ = 0.0;
  double xi_ = 0.0;
  double eta_ = 1.0;
};

}  // namespace srpulse
