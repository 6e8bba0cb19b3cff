#include "srpulse/lindblad.hpp"

#include "srpulse/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace srpulse {

Eigen::VectorXd hamiltonian_diagonal(const ModelParams& params) {
  const int n = params.n_atoms();
  const double quarter = 0.25 * n * static_cast<double>(n);
  Eigen::VectorXd h(dicke_dim(n));
  for (int p = 0; p <= n; ++p) {
    const double m = magnetic_number(n, p);
    h[p] = -params.twist_rate() * (quarter - m * m);
  }
  return h;
}

OperatorMatrix hamiltonian(const ModelParams& params, const CollectiveOperators& ops) {
  if (ops.n_atoms != params.n_atoms()) {
    throw DimensionError("hamiltonian: operators built for a different N");
  }
  return hamiltonian_diagonal(params).cast<cplx>().asDiagonal();
}

namespace {

struct Structure {
  Eigen::VectorXd h;
  Eigen::VectorXd d;   // diagonal of J_+ J_-
  Eigen::VectorXd s;   // s[p] = <p+1|J_-|p>
};

Structure structure_of(const ModelParams& params) {
  const int n = params.n_atoms();
  Structure st;
  st.h = hamiltonian_diagonal(params);
  st.s.resize(n);
  st.d.resize(n + 1);
  for (int p = 0; p < n; ++p) st.s[p] = lowering_coefficient(n, p);
  for (int p = 0; p < n; ++p) st.d[p] = st.s[p] * st.s[p];
  st.d[n] = 0.0;
  return st;
}

void apply_rhs(const cplx* rho, const Structure& st, double g, int dim, cplx* out) {
  const double g2 = 2.0 * g;
  for (int q = 0; q < dim; ++q) {
    const double hq = st.h[q];
    const double dq = st.d[q];
    const cplx* col = rho + static_cast<std::ptrdiff_t>(q) * dim;
    cplx* ocol = out + static_cast<std::ptrdiff_t>(q) * dim;
    for (int p = 0; p < dim; ++p) {
      ocol[p] = cplx(-g * (st.d[p] + dq), -(st.h[p] - hq)) * col[p];
    }
    if (q > 0 && g != 0.0) {
      const cplx* prev = rho + static_cast<std::ptrdiff_t>(q - 1) * dim;
      const double sq = g2 * st.s[q - 1];
      for (int p = 1; p < dim; ++p) ocol[p] += (sq * st.s[p - 1]) * prev[p - 1];
    }
  }
}

void check_dim(const DensityMatrix& rho, int n) {
  if (rho.rows() != dicke_dim(n) || rho.cols() != dicke_dim(n)) {
    throw DimensionError("density matrix is " + std::to_string(rho.rows()) + "x" +
                         std::to_string(rho.cols()) + ", expected N+1 = " +
                         std::to_string(dicke_dim(n)));
  }
}

}  // namespace

void lindblad_rhs(const DensityMatrix& rho, const ModelParams& params, DensityMatrix& out) {
  check_dim(rho, params.n_atoms());
  const int dim = dicke_dim(params.n_atoms());
  out.resize(dim, dim);
  apply_rhs(rho.data(), structure_of(params), params.decay_rate(), dim, out.data());
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& params) {
  DensityMatrix out;
  lindblad_rhs(rho, params, out);
  return out;
}

DensityMatrix lindblad_rhs_dense(const DensityMatrix& rho, const ModelParams& params,
                                 const CollectiveOperators& ops) {
  check_dim(rho, params.n_atoms());
  const OperatorMatrix h = hamiltonian(params, ops);
  const OperatorMatrix pm = ops.j_plus * ops.j_minus;
  const cplx i(0.0, 1.0);
  return -i * (h * rho - rho * h) +
         params.decay_rate() * (2.0 * ops.j_minus * rho * ops.j_plus - pm * rho - rho * pm);
}

EvolveDiagnostics evolve(const DensityMatrix& rho0, const Drive& drive, double t0,
                         std::span<const double> sample_times, const DensityObserver& observer,
                         const EvolveOptions& options) {
  const int n = n_atoms(drive);
  check_dim(rho0, n);
  if (!(options.tol > 0.0)) throw ConfigError("evolve: tol must be positive");
  const int dim = dicke_dim(n);

  // Constant drives reuse one structure; schedules rebuild it per call.
  const bool constant = std::holds_alternative<ModelParams>(drive);
  std::optional<Structure> fixed;
  if (constant) fixed = structure_of(std::get<ModelParams>(drive));

  auto rhs = [&](double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy.resize(y.size());
    if (constant) {
      apply_rhs(y.data(), *fixed, std::get<ModelParams>(drive).decay_rate(), dim, dy.data());
    } else {
      const ModelParams p = params_at(drive, t);
      apply_rhs(y.data(), structure_of(p), p.decay_rate(), dim, dy.data());
    }
  };

  StepControl control;
  control.rtol = options.tol;
  control.atol = options.tol;

  EvolveDiagnostics diag;
  const double trace0 = rho0.trace().real();
  DensityMatrix rho(dim, dim);
  const Eigen::VectorXcd y0 = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), rho0.size());
  const std::vector<double> breaks = breakpoints(drive);

  diag.stats = integrate_samples<Eigen::VectorXcd>(
      rhs, t0, y0, sample_times, breaks, control, [&](double t, const Eigen::VectorXcd& y) {
        rho = Eigen::Map<const DensityMatrix>(y.data(), dim, dim);
        const double drift = std::abs(rho.trace().real() - trace0);
        diag.max_trace_drift = std::max(diag.max_trace_drift, drift);
        if (drift > options.trace_drift_limit) {
          throw NumericalError("trace drift " + std::to_string(drift) + " at t = " +
                               std::to_string(t) + " exceeds the limit; tighten the tolerance");
        }
        diag.max_hermiticity_error =
            std::max(diag.max_hermiticity_error, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        if (options.check_positivity) {
          const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
          Eigen::SelfAdjointEigenSolver<DensityMatrix> es(herm, Eigen::EigenvaluesOnly);
          diag.min_eigenvalue = std::min(diag.min_eigenvalue, es.eigenvalues().minCoeff());
        }
        observer(t, rho);
      });
  return diag;
}

}  // namespace srpulse
