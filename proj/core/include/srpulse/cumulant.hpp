#pragma once

#include "srpulse/schedule.hpp"
#include "srpulse/spin_moments.hpp"
#include "srpulse/spin_polynomial.hpp"

#include <Eigen/Core>

#include <array>
#include <span>
#include <vector>

namespace srpulse {

/// First moments and the six real second moments of the Gaussian backend.
/// second holds Re<J_j J_k> for (xx, xy, xz, yy, yz, zz); the ordered
/// moment is recovered as Re<J_j J_k> + (i/2) eps_jkl <J_l>.
struct MomentState {
  std::array<double, 3> first{};
  std::array<double, 6> second{};

  static constexpr int kSize = 9;

  static MomentState from_state(const DensityMatrix& rho);
  static MomentState from_state(const DickeVector& psi);

  /// Position of the pair (j, k) in `second`, symmetric in j and k.
  static int pair_index(int j, int k);

  double symmetric(int j, int k) const { return second[static_cast<std::size_t>(pair_index(j, k))]; }
  /// <J_j J_k> in the given order.
  cplx ordered(int j, int k) const;
  /// <J_j J_k> - <J_j><J_k>.
  cplx connected(int j, int k) const { return ordered(j, k) - first[j] * first[k]; }
  SecondMoments ordered_second() const;

  /// <J_x^2> + <J_y^2> + <J_z^2>.
  double casimir() const { return second[0] + second[3] + second[5]; }

  Eigen::VectorXd to_vector() const;
  static MomentState from_vector(const Eigen::VectorXd& v);
};

/// Second-order Gaussian closure of every ordered third moment:
///   <J_j J_k J_l> = <J_j><J_k J_l> + <J_k><J_j J_l> + <J_l><J_j J_k> - 2<J_j><J_k><J_l>
ThirdMoments closure3(const MomentState& state);

/// Time derivative of the nine stored moments. Products are first brought to
/// x <= y <= z order with the commutation relations; the remaining sorted
/// third moments are closed with closure3.
MomentState moment_rhs(const MomentState& state, const ModelParams& params);

/// Derivatives of <J_x>, <J_y>, <J_z>, then Re-parts of the six ordered
/// second moments, with every moment supplied by `oracle` in the operator
/// order in which it appears in the commutator expansion. No closure.
std::array<cplx, 9> moment_rhs_unclosed(const MomentOracle& oracle, const ModelParams& params);

/// Oracle returning products of first moments, <J_a J_b ...> -> <J_a><J_b>...
MomentOracle factorized_oracle(const std::array<double, 3>& first);

struct CumulantTrajectory {
  std::vector<double> times;
  std::vector<MomentState> states;

  std::size_t size() const { return times.size(); }
  /// Connected ordered second cumulants at sample i.
  SecondMoments connected(std::size_t i) const;
};

struct Cumulant2Options {
  double tol = 1e-8;
  /// Evolve the first moments with every product factorized, which is the
  /// mean-field limit; second moments are reported as products.
  bool force_factorization = false;
};

/// Throws IntegrationError on step-size underflow.
CumulantTrajectory integrate_cumulant2(const MomentState& initial, const Drive& drive, double t0,
                                       std::span<const double> sample_times,
                                       const Cumulant2Options& options = {});
/// Initial moments are taken exactly from the state.
CumulantTrajectory integrate_cumulant2(const DickeVector& initial, const Drive& drive, double t0,
                                       std::span<const double> sample_times,
                                       const Cumulant2Options& options = {});

/// Joint cumulant of an ordered operator tuple from its moments,
///   sum over partitions P of (|P|-1)! (-1)^(|P|-1) prod_{B in P} <B>,
/// where each block keeps the relative order of its operators.
/// Supports 1 <= ops.size() <= 4; throws std::invalid_argument otherwise.
cplx cumulant_from_moments(const MomentOracle& oracle, std::span<const Axis> ops);

}  // namespace srpulse
