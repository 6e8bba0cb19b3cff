#pragma once

#include "srpulse/spin_algebra.hpp"

#include <array>
#include <span>
#include <vector>

namespace srpulse {

using FirstMoments = std::array<cplx, 3>;
/// Ordered second moments, entry [j][k] = <J_j J_k>.
using SecondMoments = std::array<std::array<cplx, 3>, 3>;
/// Ordered third moments, flat index 9j + 3k + l holds <J_j J_k J_l>.
using ThirdMoments = std::array<cplx, 27>;

inline constexpr int third_index(int j, int k, int l) { return 9 * j + 3 * k + l; }

/// Ordered moments <J_{a1} J_{a2} ... J_{ak}> of a pure or mixed state.
///
/// J_+, J_- and J_z each have a single nonzero diagonal in the Dicke basis,
/// so any product of them also has one, and its expectation costs O(N k).
/// Cartesian words are expanded through J_x = (J_+ + J_-)/2 and
/// J_y = (J_+ - J_-)/(2i). The evaluator keeps a reference to the state,
/// which must outlive it.
class MomentEvaluator {
 public:
  explicit MomentEvaluator(const DensityMatrix& rho);
  explicit MomentEvaluator(const DickeVector& psi);
  MomentEvaluator(DensityMatrix&&) = delete;
  MomentEvaluator(DickeVector&&) = delete;

  int n_atoms() const { return n_atoms_; }

  /// Expectation of the ordered Cartesian product; an empty word gives
  /// the trace (or squared norm).
  cplx operator()(std::span<const Axis> word) const;

  FirstMoments first() const;
  SecondMoments second() const;
  ThirdMoments third() const;

  /// All 3^order ordered Cartesian moments, flat index in base 3 with the
  /// leftmost operator as the most significant digit.
  std::vector<cplx> all_ordered(int order) const;

 private:
  enum class Ladder : std::uint8_t { Plus = 0, Minus = 1, Z = 2 };

  cplx ladder_expectation(std::span<const Ladder> word) const;
  std::vector<cplx> ladder_table(int order) const;

  const DensityMatrix* rho_ = nullptr;
  const DickeVector* psi_ = nullptr;
  int n_atoms_ = 0;
  std::vector<double> lowering_;
};

}  // namespace srpulse
