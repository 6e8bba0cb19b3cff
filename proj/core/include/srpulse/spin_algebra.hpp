#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>

namespace srpulse {

using cplx = std::complex<double>;

/// Amplitudes in the Dicke basis |J, J-p>, p = 0..N (index 0 is |J, J>).
using DickeVector = Eigen::VectorXcd;
/// Dense (N+1)x(N+1) density matrix in the same basis.
using DensityMatrix = Eigen::MatrixXcd;
using OperatorMatrix = Eigen::MatrixXcd;

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

inline constexpr Axis kAxes[3] = {Axis::X, Axis::Y, Axis::Z};

inline constexpr int index_of(Axis a) { return static_cast<int>(a); }

/// Levi-Civita symbol on (x, y, z).
constexpr int levi_civita(int j, int k, int l) {
  return (j - k) * (k - l) * (l - j) / 2;
}

/// Dimension N+1 of the symmetric J = N/2 manifold.
inline int dicke_dim(int n_atoms) { return n_atoms + 1; }

/// Magnetic quantum number m = J - p of basis index p.
inline double magnetic_number(int n_atoms, int p) { return 0.5 * n_atoms - p; }

/// Matrix element <J, m-1| J_- |J, m> for m = J - p, i.e. sqrt((N-p)(p+1)).
double lowering_coefficient(int n_atoms, int p);

/// Collective spin operators of N two-level atoms on the J = N/2 manifold.
struct CollectiveOperators {
  int n_atoms = 0;
  OperatorMatrix j_plus;
  OperatorMatrix j_minus;
  OperatorMatrix j_z;
  OperatorMatrix j_x;
  OperatorMatrix j_y;

  const OperatorMatrix& axis(Axis a) const;
};

/// Throws ConfigError for n_atoms < 1.
CollectiveOperators build_operators(int n_atoms);

/// Spin coherent state |theta, phi> with amplitudes
///   sqrt(C(N,p)) cos(theta/2)^(N-p) sin(theta/2)^p e^{i p phi}.
/// Binomials and powers are combined in log space so the south pole and
/// large N do not overflow. theta must lie in [0, pi], phi in [0, 2 pi).
DickeVector coherent_state(int n_atoms, double theta, double phi);

/// Basis vector |J, J-p>.
DickeVector dicke_state(int n_atoms, int p);

DensityMatrix projector(const DickeVector& psi);

/// <psi|A|psi>. Throws DimensionError on mismatch.
cplx expectation(const OperatorMatrix& a, const DickeVector& psi);
/// Tr(A rho). Throws DimensionError on mismatch.
cplx expectation(const OperatorMatrix& a, const DensityMatrix& rho);

/// exp(-i angle J_z) applied to a state; shifts the azimuth of coherent
/// states by +angle (up to a global phase).
DickeVector rotated_about_z(const DickeVector& psi, double angle);
DensityMatrix rotated_about_z(const DensityMatrix& rho, double angle);

/// Reduce an angle into [0, 2 pi).
double wrap_angle(double phi);

}  // namespace srpulse
