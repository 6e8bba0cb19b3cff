#pragma once

#include "srpulse/integrator.hpp"
#include "srpulse/schedule.hpp"
#include "srpulse/spin_algebra.hpp"

#include <Eigen/Core>

#include <functional>
#include <span>

namespace srpulse {

/// Diagonal of H = -(xi lambda^2/N)(N^2/4 - J_z^2) in the Dicke basis.
Eigen::VectorXd hamiltonian_diagonal(const ModelParams& params);

/// H as a dense matrix.
OperatorMatrix hamiltonian(const ModelParams& params, const CollectiveOperators& ops);

/// Master equation right-hand side
///   -i[H, rho] + (eta lambda^2/N)(2 J_- rho J_+ - J_+J_- rho - rho J_+J_-).
/// H is diagonal and J_- has a single subdiagonal, so the update is
/// elementwise:
///   drho_pq = (-i(h_p - h_q) - g(d_p + d_q)) rho_pq + 2g s_{p-1} s_{q-1} rho_{p-1,q-1}
/// with s_p the lowering coefficients and d_p = s_{p-1}^2. O(N^2).
void lindblad_rhs(const DensityMatrix& rho, const ModelParams& params, DensityMatrix& out);
DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& params);

/// The same generator built from dense operator products; O(N^3).
DensityMatrix lindblad_rhs_dense(const DensityMatrix& rho, const ModelParams& params,
                                 const CollectiveOperators& ops);

struct EvolveOptions {
  double tol = 1e-8;
  /// |Tr rho - 1| beyond this aborts the run with NumericalError.
  double trace_drift_limit = 1e-6;
  /// Smallest eigenvalue of every sample; O(N^3) per sample.
  bool check_positivity = false;
};

struct EvolveDiagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  /// +inf unless check_positivity was set.
  double min_eigenvalue = std::numeric_limits<double>::infinity();
  IntegratorStats stats;
};

using DensityObserver = std::function<void(double t, const DensityMatrix& rho)>;

/// Integrate rho from t0 through the sample times, calling observer(t, rho)
/// at each one; nothing but the current state is retained. Parameters are
/// re-read from the drive at every right-hand side evaluation, and the
/// stepper restarts at schedule breakpoints.
/// Throws IntegrationError or NumericalError (trace drift).
EvolveDiagnostics evolve(const DensityMatrix& rho0, const Drive& drive, double t0,
                         std::span<const double> sample_times, const DensityObserver& observer,
                         const EvolveOptions& options = {});

}  // namespace srpulse
