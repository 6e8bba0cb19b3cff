#pragma once

#include "srpulse/spin_algebra.hpp"

#include <functional>
#include <map>
#include <span>
#include <vector>

namespace srpulse {

/// Ordered product of Cartesian spin components, leftmost factor first.
using SpinWord = std::vector<Axis>;

/// Oracle returning <word> for an ordered product.
using MomentOracle = std::function<cplx(std::span<const Axis>)>;

/// Noncommutative polynomial in J_x, J_y, J_z with complex coefficients.
/// Terms are stored exactly as produced; normal_ordered() rewrites every
/// word in the canonical x <= y <= z order using [J_j, J_k] = i eps_jkl J_l.
class SpinPolynomial {
 public:
  SpinPolynomial() = default;

  static SpinPolynomial constant(cplx c);
  static SpinPolynomial generator(Axis a);
  static SpinPolynomial word(const SpinWord& w, cplx coef = 1.0);
  /// J_+ = J_x + i J_y and J_- = J_x - i J_y.
  static SpinPolynomial raising();
  static SpinPolynomial lowering();

  const std::map<SpinWord, cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int degree() const;

  SpinPolynomial& operator+=(const SpinPolynomial& other);
  SpinPolynomial& operator-=(const SpinPolynomial& other);
  SpinPolynomial& operator*=(cplx scale);

  friend SpinPolynomial operator+(SpinPolynomial a, const SpinPolynomial& b) { return a += b; }
  friend SpinPolynomial operator-(SpinPolynomial a, const SpinPolynomial& b) { return a -= b; }
  friend SpinPolynomial operator*(cplx s, SpinPolynomial a) { return a *= s; }
  /// Concatenation product.
  friend SpinPolynomial operator*(const SpinPolynomial& a, const SpinPolynomial& b);

  SpinPolynomial normal_ordered() const;

  /// Drop terms whose coefficient magnitude is <= eps.
  SpinPolynomial pruned(double eps = 1e-14) const;

  cplx evaluate(const MomentOracle& oracle) const;

 private:
  void add_term(const SpinWord& w, cplx c);

  std::map<SpinWord, cplx> terms_;
};

/// [A, B] expanded with the Leibniz rule down to commutators of single
/// generators; the remaining products are left in the order produced.
SpinPolynomial commutator(const SpinPolynomial& a, const SpinPolynomial& b);

/// Heisenberg-picture generator of the model, split by rate:
///   d<A>/dt = twist_rate * <twist> + decay_rate * <decay>
/// with twist = i [A, J_x^2 + J_y^2] and decay = J_+[A, J_-] + [J_+, A] J_-.
struct GeneratorTerms {
  SpinPolynomial twist;
  SpinPolynomial decay;
};

GeneratorTerms heisenberg_generator(const SpinPolynomial& a);

}  // namespace srpulse
