#include "srpulse/spin_polynomial.hpp"

#include <algorithm>

namespace srpulse {

SpinPolynomial SpinPolynomial::constant(cplx c) {
  SpinPolynomial p;
  p.add_term({}, c);
  return p;
}

SpinPolynomial SpinPolynomial::generator(Axis a) { return word({a}); }

SpinPolynomial SpinPolynomial::word(const SpinWord& w, cplx coef) {
  SpinPolynomial p;
  p.add_term(w, coef);
  return p;
}

SpinPolynomial SpinPolynomial::raising() {
  return generator(Axis::X) + cplx(0.0, 1.0) * generator(Axis::Y);
}

SpinPolynomial SpinPolynomial::lowering() {
  return generator(Axis::X) - cplx(0.0, 1.0) * generator(Axis::Y);
}

int SpinPolynomial::degree() const {
  int d = -1;
  for (const auto& [w, c] : terms_) d = std::max(d, static_cast<int>(w.size()));
  return d;
}

void SpinPolynomial::add_term(const SpinWord& w, cplx c) {
  if (c == cplx(0.0)) return;
  auto [it, inserted] = terms_.emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx(0.0)) terms_.erase(it);
  }
}

SpinPolynomial& SpinPolynomial::operator+=(const SpinPolynomial& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

SpinPolynomial& SpinPolynomial::operator-=(const SpinPolynomial& other) {
  for (const auto& [w, c] : other.terms_) add_term(w, -c);
  return *this;
}

SpinPolynomial& SpinPolynomial::operator*=(cplx scale) {
  if (scale == cplx(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= scale;
  return *this;
}

SpinPolynomial operator*(const SpinPolynomial& a, const SpinPolynomial& b) {
  SpinPolynomial out;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      SpinWord w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  }
  return out;
}

SpinPolynomial SpinPolynomial::normal_ordered() const {
  // Bubble the first out-of-order adjacent pair until every word is sorted:
  //   J_k J_j = J_j J_k - i eps_jkl J_l   (j < k)
  std::map<SpinWord, cplx> pending = terms_;
  SpinPolynomial out;
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    const SpinWord& w = node.key();
    const cplx c = node.mapped();
    std::size_t pos = 0;
    while (pos + 1 < w.size() && index_of(w[pos]) <= index_of(w[pos + 1])) ++pos;
    if (pos + 1 >= w.size()) {
      out.add_term(w, c);
      continue;
    }
    const int k = index_of(w[pos]);
    const int j = index_of(w[pos + 1]);
    SpinWord swapped = w;
    std::swap(swapped[pos], swapped[pos + 1]);
    auto accumulate = [&pending](const SpinWord& key, cplx v) {
      auto [it, inserted] = pending.emplace(key, v);
      if (!inserted) {
        it->second += v;
        if (it->second == cplx(0.0)) pending.erase(it);
      }
    };
    accumulate(swapped, c);
    const int l = 3 - j - k;
    const int eps = levi_civita(j, k, l);
    SpinWord reduced(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pos));
    reduced.push_back(static_cast<Axis>(l));
    reduced.insert(reduced.end(), w.begin() + static_cast<std::ptrdiff_t>(pos + 2), w.end());
    accumulate(reduced, c * cplx(0.0, -static_cast<double>(eps)));
  }
  return out;
}

SpinPolynomial SpinPolynomial::pruned(double eps) const {
  SpinPolynomial out;
  for (const auto& [w, c] : terms_) {
    if (std::abs(c) > eps) out.terms_.emplace(w, c);
  }
  return out;
}

cplx SpinPolynomial::evaluate(const MomentOracle& oracle) const {
  cplx acc = 0.0;
  for (const auto& [w, c] : terms_) acc += c * oracle(w);
  return acc;
}

namespace {

// [J_a, J_b] = i eps_abl J_l
SpinPolynomial generator_commutator(Axis a, Axis b) {
  const int ia = index_of(a);
  const int ib = index_of(b);
  if (ia == ib) return {};
  const int l = 3 - ia - ib;
  return SpinPolynomial::word({static_cast<Axis>(l)}, cplx(0.0, levi_civita(ia, ib, l)));
}

// [w, J_b] for a single word via the Leibniz rule.
SpinPolynomial word_commutator(const SpinWord& w, Axis b) {
  SpinPolynomial out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const SpinPolynomial left =
        SpinPolynomial::word(SpinWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i)));
    const SpinPolynomial right =
        SpinPolynomial::word(SpinWord(w.begin() + static_cast<std::ptrdiff_t>(i + 1), w.end()));
    out += left * generator_commutator(w[i], b) * right;
  }
  return out;
}

// [w, v] for two words: expand over the factors of v.
SpinPolynomial word_word_commutator(const SpinWord& w, const SpinWord& v) {
  SpinPolynomial out;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const SpinPolynomial left =
        SpinPolynomial::word(SpinWord(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(j)));
    const SpinPolynomial right =
        SpinPolynomial::word(SpinWord(v.begin() + static_cast<std::ptrdiff_t>(j + 1), v.end()));
    out += left * word_commutator(w, v[j]) * right;
  }
  return out;
}

}  // namespace

SpinPolynomial commutator(const SpinPolynomial& a, const SpinPolynomial& b) {
  SpinPolynomial out;
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      SpinPolynomial t = word_word_commutator(wa, wb);
      t *= ca * cb;
      out += t;
    }
  }
  return out;
}

GeneratorTerms heisenberg_generator(const SpinPolynomial& a) {
  const SpinPolynomial jx = SpinPolynomial::generator(Axis::X);
  const SpinPolynomial jy = SpinPolynomial::generator(Axis::Y);
  const SpinPolynomial jp = SpinPolynomial::raising();
  const SpinPolynomial jm = SpinPolynomial::lowering();
  GeneratorTerms g;
  g.twist = cplx(0.0, 1.0) * commutator(a, jx * jx + jy * jy);
  g.decay = jp * commutator(a, jm) + commutator(jp, a) * jm;
  g.twist = g.twist.pruned();
  g.decay = g.decay.pruned();
  return g;
}

}  // namespace srpulse
