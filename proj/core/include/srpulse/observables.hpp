#pragma once

#include "srpulse/cumulant.hpp"
#include "srpulse/spin_moments.hpp"

#include <Eigen/Core>

#include <array>
#include <string>

namespace srpulse {

/// Gauss-Legendre nodes and weights on [-1, 1] (Golub-Welsch).
struct GaussLegendre {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussLegendre gauss_legendre(int n);

/// Spin Q-function on a product grid: theta at Gauss-Legendre nodes in
/// cos(theta), phi uniform on [0, 2 pi).
struct QGrid {
  int n_atoms = 0;
  Eigen::VectorXd theta;
  /// Quadrature weights for d(cos theta), summing to 2.
  Eigen::VectorXd theta_weights;
  Eigen::VectorXd phi;
  /// values(i, j) = Q(theta_i, phi_j).
  Eigen::MatrixXd values;

  /// (N+1)/(4 pi) * sum_ij w_i (2 pi / n_phi) Q_ij; 1 for a normalized state.
  double normalization() const;
  /// "theta,phi,q" rows.
  std::string to_csv() const;
  /// {"n_atoms", "theta": [...], "phi": [...], "values": [[row per theta]]}.
  std::string to_json() const;
};

/// Q(theta, phi) = <theta, phi| rho |theta, phi>. For each theta the
/// diagonals g_d = sum_p a_p a_{p+d} rho_{p,p+d} are formed once, then
/// Q(phi) = sum_d g_d e^{i d phi}. Throws ConfigError below 8x8.
QGrid q_function(const DensityMatrix& rho, int n_theta, int n_phi);
QGrid q_function(const DickeVector& psi, int n_theta, int n_phi);
/// Default resolution (2N+1) x (2N+2).
QGrid q_function(const DensityMatrix& rho);

/// Perpendicular-variance analysis around the mean spin. Angles are measured
/// from the longitudinal direction e1 = theta-hat towards e2 = phi-hat and
/// reported in [0, pi).
struct Deformation {
  double chi2 = 1.0;
  double variance_max = 0.0;
  double variance_min = 0.0;
  double phi_max = 0.0;
  double phi_min = 0.0;
};

/// chi^2 from a mean spin and the symmetrized covariance
/// C_jk = Re<J_j J_k> - <J_j><J_k>. Throws NumericalError if |<J>| is below
/// 1e-9 N or the smaller variance is not positive. Degenerate variances
/// give chi2 = 1.
Deformation chi_squared(const std::array<double, 3>& mean, const Eigen::Matrix3d& covariance,
                        int n_atoms);
Deformation chi_squared(const DensityMatrix& rho);
Deformation chi_squared(const DickeVector& psi);
Deformation chi_squared(const MomentState& state, int n_atoms);

/// All 27 ordered <J_j J_k J_l>.
ThirdMoments moments_third(const DensityMatrix& rho);

/// <J_j J_k J_l>_c = <jkl> - <j><kl> - <k><jl> - <l><jk> + 2<j><k><l>.
ThirdMoments third_cumulants(const FirstMoments& first, const SecondMoments& second,
                             const ThirdMoments& third);

/// Order 2: sum over 9 ordered |<J_j J_k>_c|; order 3: sum over 27 ordered
/// |<J_j J_k J_l>_c|. Throws std::invalid_argument for other orders.
double c_total(const DensityMatrix& rho, int order);
double c_total(const DickeVector& psi, int order);
double c_total(const MomentEvaluator& eval, int order);

/// Sum over multisets of size n of |n! <S prod J>_c|, with S the average
/// over all orderings and the cumulant built from symmetrized moments.
/// 1 <= n <= 4, otherwise std::invalid_argument.
double cn_total_symmetrized(const DensityMatrix& rho, int n);
double cn_total_symmetrized(const MomentEvaluator& eval, int n);

/// Every diagnostic of one state.
struct CorrelationReport {
  std::array<double, 3> mean_spin{};
  Deformation deformation;
  double c2_total = 0.0;
  double c3_total = 0.0;
};

/// chi2 is left at its defaults when the mean spin is too short.
CorrelationReport correlation_report(const DensityMatrix& rho);

}  // namespace srpulse
