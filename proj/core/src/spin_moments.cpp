#include "srpulse/spin_moments.hpp"

#include "srpulse/errors.hpp"

#include <stdexcept>

namespace srpulse {

namespace {

// Row axis of the Cartesian -> ladder change of basis:
//   J_x = 1/2 J_+ + 1/2 J_-,  J_y = -i/2 J_+ + i/2 J_-,  J_z = J_z.
constexpr cplx kToLadder[3][3] = {
    {cplx(0.5, 0.0), cplx(0.5, 0.0), cplx(0.0, 0.0)},
    {cplx(0.0, -0.5), cplx(0.0, 0.5), cplx(0.0, 0.0)},
    {cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0)},
};

std::size_t pow3(int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= 3;
  return r;
}

}  // namespace

MomentEvaluator::MomentEvaluator(const DensityMatrix& rho)
    : rho_(&rho), n_atoms_(static_cast<int>(rho.rows()) - 1) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) {
    throw DimensionError("MomentEvaluator: density matrix must be square with dimension >= 2");
  }
  lowering_.resize(static_cast<std::size_t>(n_atoms_));
  for (int p = 0; p < n_atoms_; ++p) lowering_[p] = lowering_coefficient(n_atoms_, p);
}

MomentEvaluator::MomentEvaluator(const DickeVector& psi)
    : psi_(&psi), n_atoms_(static_cast<int>(psi.size()) - 1) {
  if (psi.size() < 2) throw DimensionError("MomentEvaluator: state dimension must be >= 2");
  lowering_.resize(static_cast<std::size_t>(n_atoms_));
  for (int p = 0; p < n_atoms_; ++p) lowering_[p] = lowering_coefficient(n_atoms_, p);
}

cplx MomentEvaluator::ladder_expectation(std::span<const Ladder> word) const {
  const int dim = n_atoms_ + 1;
  const double spin = 0.5 * n_atoms_;
  cplx acc = 0.0;
  for (int col = 0; col < dim; ++col) {
    // The product maps |col> to coef |row>; apply the rightmost factor first.
    double coef = 1.0;
    int row = col;
    for (auto it = word.rbegin(); it != word.rend() && coef != 0.0; ++it) {
      switch (*it) {
        case Ladder::Z:
          coef *= spin - row;
          break;
        case Ladder::Minus:
          if (row >= n_atoms_) {
            coef = 0.0;
          } else {
            coef *= lowering_[row];
            ++row;
          }
          break;
        case Ladder::Plus:
          if (row == 0) {
            coef = 0.0;
          } else {
            --row;
            coef *= lowering_[row];
          }
          break;
      }
    }
    if (coef == 0.0) continue;
    if (rho_ != nullptr) {
      acc += coef * (*rho_)(col, row);
    } else {
      acc += coef * std::conj((*psi_)(row)) * (*psi_)(col);
    }
  }
  return acc;
}

std::vector<cplx> MomentEvaluator::ladder_table(int order) const {
  const std::size_t count = pow3(order);
  std::vector<cplx> table(count);
  std::vector<Ladder> word(static_cast<std::size_t>(order));
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rem = idx;
    for (int pos = order - 1; pos >= 0; --pos) {
      word[static_cast<std::size_t>(pos)] = static_cast<Ladder>(rem % 3);
      rem /= 3;
    }
    table[idx] = ladder_expectation(word);
  }
  return table;
}

std::vector<cplx> MomentEvaluator::all_ordered(int order) const {
  if (order < 0 || order > 8) throw std::invalid_argument("all_ordered: order must be in [0, 8]");
  std::vector<cplx> table = ladder_table(order);
  // Change basis one tensor slot at a time.
  std::vector<cplx> next(table.size());
  for (int pos = 0; pos < order; ++pos) {
    const std::size_t stride = pow3(order - 1 - pos);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      const std::size_t digit = (idx / stride) % 3;
      const std::size_t base = idx - digit * stride;
      cplx v = 0.0;
      for (std::size_t b = 0; b < 3; ++b) v += kToLadder[digit][b] * table[base + b * stride];
      next[idx] = v;
    }
    table.swap(next);
  }
  return table;
}

cplx MomentEvaluator::operator()(std::span<const Axis> word) const {
  const int order = static_cast<int>(word.size());
  // Expand each Cartesian factor into at most two ladder factors.
  std::vector<Ladder> ladder(word.size());
  cplx total = 0.0;
  const std::size_t combos = std::size_t{1} << word.size();
  for (std::size_t mask = 0; mask < combos; ++mask) {
    cplx weight = 1.0;
    bool skip = false;
    for (int pos = 0; pos < order && !skip; ++pos) {
      const int a = index_of(word[static_cast<std::size_t>(pos)]);
      const bool second = (mask >> pos) & 1U;
      if (a == 2) {
        if (second) skip = true;
        ladder[static_cast<std::size_t>(pos)] = Ladder::Z;
      } else {
        const int b = second ? 1 : 0;
        weight *= kToLadder[a][b];
        ladder[static_cast<std::size_t>(pos)] = static_cast<Ladder>(b);
      }
    }
    if (skip) continue;
    total += weight * ladder_expectation(ladder);
  }
  return total;
}

FirstMoments MomentEvaluator::first() const {
  const auto t = all_ordered(1);
  return {t[0], t[1], t[2]};
}

SecondMoments MomentEvaluator::second() const {
  const auto t = all_ordered(2);
  SecondMoments m{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) m[j][k] = t[static_cast<std::size_t>(3 * j + k)];
  }
  return m;
}

ThirdMoments MomentEvaluator::third() const {
  const auto t = all_ordered(3);
  ThirdMoments m{};
  for (std::size_t i = 0; i < 27; ++i) m[i] = t[i];
  return m;
}

}  // namespace srpulse
