#include "srpulse/spin_algebra.hpp"

#include "srpulse/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace srpulse {

double lowering_coefficient(int n_atoms, int p) {
  return std::sqrt(static_cast<double>(n_atoms - p) * static_cast<double>(p + 1));
}

const OperatorMatrix& CollectiveOperators::axis(Axis a) const {
  switch (a) {
    case Axis::X: return j_x;
    case Axis::Y: return j_y;
    case Axis::Z: return j_z;
  }
  return j_z;
}

CollectiveOperators build_operators(int n_atoms) {
  if (n_atoms < 1) {
    throw ConfigError("build_operators: n_atoms must be >= 1, got " + std::to_string(n_atoms));
  }
  const int dim = dicke_dim(n_atoms);
  CollectiveOperators ops;
  ops.n_atoms = n_atoms;
  ops.j_minus = OperatorMatrix::Zero(dim, dim);
  ops.j_z = OperatorMatrix::Zero(dim, dim);
  for (int p = 0; p < dim; ++p) {
    ops.j_z(p, p) = magnetic_number(n_atoms, p);
    if (p + 1 < dim) ops.j_minus(p + 1, p) = lowering_coefficient(n_atoms, p);
  }
  ops.j_plus = ops.j_minus.adjoint();
  ops.j_x = 0.5 * (ops.j_plus + ops.j_minus);
  ops.j_y = cplx(0.0, -0.5) * (ops.j_plus - ops.j_minus);
  return ops;
}

DickeVector coherent_state(int n_atoms, double theta, double phi) {
  if (n_atoms < 1) throw ConfigError("coherent_state: n_atoms must be >= 1");
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw ConfigError("coherent_state: theta must lie in [0, pi]");
  }
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    throw ConfigError("coherent_state: phi must lie in [0, 2 pi)");
  }
  const int dim = dicke_dim(n_atoms);
  const double log_c = std::log(std::cos(0.5 * theta));
  const double log_s = std::log(std::sin(0.5 * theta));
  const double log_nfact = std::lgamma(n_atoms + 1.0);

  DickeVector psi(dim);
  for (int p = 0; p < dim; ++p) {
    const int q = n_atoms - p;
    // 0 * log(0) is taken as 0 so the poles give exact basis vectors.
    double log_amp = 0.5 * (log_nfact - std::lgamma(p + 1.0) - std::lgamma(q + 1.0));
    if (q > 0) log_amp += q * log_c;
    if (p > 0) log_amp += p * log_s;
    const double mag = std::isfinite(log_amp) ? std::exp(log_amp) : 0.0;
    psi(p) = std::polar(mag, p * phi);
  }
  psi /= psi.norm();
  return psi;
}

DickeVector dicke_state(int n_atoms, int p) {
  if (n_atoms < 1 || p < 0 || p > n_atoms) throw ConfigError("dicke_state: index out of range");
  DickeVector psi = DickeVector::Zero(dicke_dim(n_atoms));
  psi(p) = 1.0;
  return psi;
}

DensityMatrix projector(const DickeVector& psi) { return psi * psi.adjoint(); }

cplx expectation(const OperatorMatrix& a, const DickeVector& psi) {
  if (a.rows() != psi.size() || a.cols() != psi.size()) {
    throw DimensionError("expectation: operator is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", state has length " +
                         std::to_string(psi.size()));
  }
  return psi.dot(a * psi);
}

cplx expectation(const OperatorMatrix& a, const DensityMatrix& rho) {
  if (a.rows() != rho.rows() || a.cols() != rho.cols() || a.rows() != a.cols()) {
    throw DimensionError("expectation: operator is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", density matrix is " +
                         std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()));
  }
  // Tr(A rho) without forming the product.
  return (a.transpose().cwiseProduct(rho)).sum();
}

DickeVector rotated_about_z(const DickeVector& psi, double angle) {
  DickeVector out(psi.size());
  for (Eigen::Index p = 0; p < psi.size(); ++p) {
    out(p) = psi(p) * std::polar(1.0, static_cast<double>(p) * angle);
  }
  return out;
}

DensityMatrix rotated_about_z(const DensityMatrix& rho, double angle) {
  DensityMatrix out(rho.rows(), rho.cols());
  for (Eigen::Index q = 0; q < rho.cols(); ++q) {
    for (Eigen::Index p = 0; p < rho.rows(); ++p) {
      out(p, q) = rho(p, q) * std::polar(1.0, static_cast<double>(p - q) * angle);
    }
  }
  return out;
}

double wrap_angle(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

}  // namespace srpulse
