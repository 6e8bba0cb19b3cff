#include "srpulse/observables.hpp"

#include "srpulse/errors.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace srpulse {

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  GaussLegendre gl;
  gl.nodes = es.eigenvalues();
  gl.weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return gl;
}

double QGrid::normalization() const {
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(phi.size());
  const double sum = (theta_weights.transpose() * values).sum() * dphi;
  return (n_atoms + 1) / (4.0 * std::numbers::pi) * sum;
}

std::string QGrid::to_csv() const {
  std::string out = "theta,phi,q\n";
  char line[96];
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    for (Eigen::Index j = 0; j < phi.size(); ++j) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", theta[i], phi[j], values(i, j));
      out += line;
    }
  }
  return out;
}

std::string QGrid::to_json() const {
  nlohmann::json j;
  j["n_atoms"] = n_atoms;
  j["theta"] = std::vector<double>(theta.data(), theta.data() + theta.size());
  j["phi"] = std::vector<double>(phi.data(), phi.data() + phi.size());
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    const Eigen::VectorXd row = values.row(i).transpose();
    rows.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  j["values"] = rows;
  return j.dump();
}

namespace {

QGrid make_grid(int n_atoms, int n_theta, int n_phi) {
  if (n_theta < 8 || n_phi < 8) throw ConfigError("q_function: resolution must be at least 8x8");
  const GaussLegendre gl = gauss_legendre(n_theta);
  QGrid g;
  g.n_atoms = n_atoms;
  // Descending cos(theta) so theta increases with the row index.
  g.theta.resize(n_theta);
  g.theta_weights.resize(n_theta);
  for (int i = 0; i < n_theta; ++i) {
    g.theta[i] = std::acos(std::clamp(gl.nodes[n_theta - 1 - i], -1.0, 1.0));
    g.theta_weights[i] = gl.weights[n_theta - 1 - i];
  }
  g.phi.resize(n_phi);
  for (int j = 0; j < n_phi; ++j) g.phi[j] = 2.0 * std::numbers::pi * j / n_phi;
  g.values.resize(n_theta, n_phi);
  return g;
}

template <class Element>
QGrid q_function_impl(int n, int n_theta, int n_phi, Element&& rho_pq) {
  QGrid g = make_grid(n, n_theta, n_phi);
  const int dim = n + 1;
  Eigen::VectorXcd diag(dim);
  for (int i = 0; i < n_theta; ++i) {
    const Eigen::VectorXd a = coherent_state(n, g.theta[i], 0.0).real();
    for (int d = 0; d < dim; ++d) {
      cplx acc = 0.0;
      for (int p = 0; p + d < dim; ++p) acc += a[p] * a[p + d] * rho_pq(p, p + d);
      diag[d] = acc;
    }
    for (int j = 0; j < n_phi; ++j) {
      const cplx step = std::polar(1.0, g.phi[j]);
      // Horner evaluation of sum_{d>0} g_d z^d.
      cplx tail = 0.0;
      for (int d = dim - 1; d >= 1; --d) tail = (tail + diag[d]) * step;
      const double q = diag[0].real() + 2.0 * tail.real();
      g.values(i, j) = std::clamp(q, 0.0, 1.0);
    }
  }
  return g;
}

}  // namespace

QGrid q_function(const DensityMatrix& rho, int n_theta, int n_phi) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) throw DimensionError("q_function: bad density matrix");
  const int n = static_cast<int>(rho.rows()) - 1;
  return q_function_impl(n, n_theta, n_phi, [&rho](int p, int q) { return rho(p, q); });
}

QGrid q_function(const DickeVector& psi, int n_theta, int n_phi) {
  if (psi.size() < 2) throw DimensionError("q_function: bad state vector");
  const int n = static_cast<int>(psi.size()) - 1;
  return q_function_impl(n, n_theta, n_phi,
                         [&psi](int p, int q) { return psi[p] * std::conj(psi[q]); });
}

QGrid q_function(const DensityMatrix& rho) {
  const int n = static_cast<int>(rho.rows()) - 1;
  return q_function(rho, 2 * n + 1, 2 * n + 2);
}

Deformation chi_squared(const std::array<double, 3>& mean, const Eigen::Matrix3d& covariance,
                        int n_atoms) {
  const Eigen::Vector3d mu(mean[0], mean[1], mean[2]);
  const double length = mu.norm();
  if (!(length >= 1e-9 * n_atoms)) {
    throw NumericalError("chi_squared: mean spin too short to define a direction");
  }
  const Eigen::Vector3d n_hat = mu / length;
  const double theta = std::acos(std::clamp(n_hat[2], -1.0, 1.0));
  const double phi = std::atan2(n_hat[1], n_hat[0]);
  const Eigen::Vector3d e1(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
                           -std::sin(theta));
  const Eigen::Vector3d e2(-std::sin(phi), std::cos(phi), 0.0);
  Eigen::Matrix2d v;
  v(0, 0) = e1.dot(covariance * e1);
  v(1, 1) = e2.dot(covariance * e2);
  v(0, 1) = v(1, 0) = e1.dot(covariance * e2);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(v);
  Deformation out;
  out.variance_min = es.eigenvalues()[0];
  out.variance_max = es.eigenvalues()[1];
  if (!(out.variance_min > 0.0)) {
    throw NumericalError("chi_squared: non-positive perpendicular variance");
  }
  auto angle = [](const Eigen::Vector2d& u) {
    double a = std::atan2(u[1], u[0]);
    if (a < 0.0) a += std::numbers::pi;
    if (a >= std::numbers::pi) a -= std::numbers::pi;
    return a;
  };
  if (out.variance_max - out.variance_min <= 1e-12 * std::max(1.0, out.variance_max)) {
    out.chi2 = 1.0;
    out.phi_max = 0.0;
    out.phi_min = 0.5 * std::numbers::pi;
    return out;
  }
  out.chi2 = out.variance_max / out.variance_min;
  out.phi_max = angle(es.eigenvectors().col(1));
  out.phi_min = angle(es.eigenvectors().col(0));
  return out;
}

namespace {

Deformation chi_from(const MomentEvaluator& eval) {
  const FirstMoments f = eval.first();
  const SecondMoments s = eval.second();
  std::array<double, 3> mean{f[0].real(), f[1].real(), f[2].real()};
  Eigen::Matrix3d cov;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) cov(j, k) = 0.5 * (s[j][k] + s[k][j]).real() - mean[j] * mean[k];
  }
  return chi_squared(mean, cov, eval.n_atoms());
}

}  // namespace

Deformation chi_squared(const DensityMatrix& rho) { return chi_from(MomentEvaluator(rho)); }
Deformation chi_squared(const DickeVector& psi) { return chi_from(MomentEvaluator(psi)); }

Deformation chi_squared(const MomentState& state, int n_atoms) {
  Eigen::Matrix3d cov;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) cov(j, k) = state.symmetric(j, k) - state.first[j] * state.first[k];
  }
  return chi_squared(state.first, cov, n_atoms);
}

ThirdMoments moments_third(const DensityMatrix& rho) { return MomentEvaluator(rho).third(); }

ThirdMoments third_cumulants(const FirstMoments& f, const SecondMoments& s, const ThirdMoments& t) {
  ThirdMoments c{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        c[third_index(j, k, l)] = t[third_index(j, k, l)] - f[j] * s[k][l] - f[k] * s[j][l] -
                                  f[l] * s[j][k] + 2.0 * f[j] * f[k] * f[l];
      }
    }
  }
  return c;
}

double c_total(const MomentEvaluator& eval, int order) {
  if (order != 2 && order != 3) {
    throw std::invalid_argument("c_total: order must be 2 or 3, got " + std::to_string(order));
  }
  const FirstMoments f = eval.first();
  const SecondMoments s = eval.second();
  double total = 0.0;
  if (order == 2) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) total += std::abs(s[j][k] - f[j] * f[k]);
    }
    return total;
  }
  for (const cplx& c : third_cumulants(f, s, eval.third())) total += std::abs(c);
  return total;
}

double c_total(const DensityMatrix& rho, int order) { return c_total(MomentEvaluator(rho), order); }
double c_total(const DickeVector& psi, int order) { return c_total(MomentEvaluator(psi), order); }

double cn_total_symmetrized(const MomentEvaluator& eval, int n) {
  if (n < 1 || n > 4) {
    throw std::invalid_argument("cn_total_symmetrized: order must be between 1 and 4");
  }
  // Ordered moments up to order n, indexed in base 3.
  std::vector<std::vector<cplx>> ordered(static_cast<std::size_t>(n + 1));
  for (int k = 1; k <= n; ++k) ordered[static_cast<std::size_t>(k)] = eval.all_ordered(k);

  const MomentOracle symmetrized = [&ordered](std::span<const Axis> word) -> cplx {
    if (word.empty()) return 1.0;
    std::vector<int> idx;
    for (Axis a : word) idx.push_back(index_of(a));
    std::sort(idx.begin(), idx.end());
    const auto& table = ordered[word.size()];
    cplx sum = 0.0;
    int count = 0;
    do {
      int flat = 0;
      for (int i : idx) flat = 3 * flat + i;
      sum += table[static_cast<std::size_t>(flat)];
      ++count;
    } while (std::next_permutation(idx.begin(), idx.end()));
    // Distinct permutations of a multiset each stand for the same number of
    // orderings, so the plain mean equals the average over all n! orderings.
    return sum / static_cast<double>(count);
  };

  static constexpr double kFactorial[5] = {1, 1, 2, 6, 24};
  double total = 0.0;
  // Multisets as sorted tuples.
  std::vector<Axis> word(static_cast<std::size_t>(n), Axis::X);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    for (int i = 0; i < n; ++i) word[static_cast<std::size_t>(i)] = static_cast<Axis>(idx[static_cast<std::size_t>(i)]);
    total += std::abs(kFactorial[n] * cumulant_from_moments(symmetrized, word));
    int pos = n - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == 2) --pos;
    if (pos < 0) break;
    const int v = ++idx[static_cast<std::size_t>(pos)];
    for (int r = pos + 1; r < n; ++r) idx[static_cast<std::size_t>(r)] = v;
  }
  return total;
}

double cn_total_symmetrized(const DensityMatrix& rho, int n) {
  return cn_total_symmetrized(MomentEvaluator(rho), n);
}

CorrelationReport correlation_report(const DensityMatrix& rho) {
  const MomentEvaluator eval(rho);
  CorrelationReport r;
  const FirstMoments f = eval.first();
  r.mean_spin = {f[0].real(), f[1].real(), f[2].real()};
  try {
    r.deformation = chi_from(eval);
  } catch (const NumericalError&) {
    r.deformation = Deformation{};
  }
  r.c2_total = c_total(eval, 2);
  r.c3_total = c_total(eval, 3);
  return r;
}

}  // namespace srpulse
