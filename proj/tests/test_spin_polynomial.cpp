#include "srpulse/spin_moments.hpp"
#include "srpulse/spin_polynomial.hpp"

#include <gtest/gtest.h>

using namespace srpulse;
using P = SpinPolynomial;

namespace {
const cplx I(0.0, 1.0);
P x() { return P::generator(Axis::X); }
P y() { return P::generator(Axis::Y); }
P z() { return P::generator(Axis::Z); }

bool same(const P& a, const P& b) { return (a - b).pruned(1e-14).empty(); }
}  // namespace

TEST(SpinPolynomial, CommutatorsOfGenerators) {
  EXPECT_TRUE(same(commutator(x(), y()), I * z()));
  EXPECT_TRUE(same(commutator(y(), z()), I * x()));
  EXPECT_TRUE(same(commutator(z(), x()), I * y()));
  EXPECT_TRUE(commutator(z(), z()).empty());
}

TEST(SpinPolynomial, LeibnizRule) {
  // [J_z, J_+] = J_+ and [J_z, J_-] = -J_-.
  EXPECT_TRUE(same(commutator(z(), P::raising()), P::raising()));
  EXPECT_TRUE(same(commutator(z(), P::lowering()), -1.0 * P::lowering()));
  // [J_x^2, J_z] = -i(J_x J_y + J_y J_x)
  EXPECT_TRUE(same(commutator(x() * x(), z()), -I * (x() * y() + y() * x())));
}

TEST(SpinPolynomial, NormalOrdering) {
  EXPECT_TRUE(same((y() * x()).normal_ordered(), x() * y() - I * z()));
  EXPECT_TRUE(same((z() * x()).normal_ordered(), x() * z() + I * y()));
  const P w = (z() * y() * x()).normal_ordered();
  for (const auto& [word, c] : w.terms()) {
    EXPECT_TRUE(std::is_sorted(word.begin(), word.end(), [](Axis a, Axis b) { return index_of(a) < index_of(b); }));
  }
}

TEST(SpinPolynomial, OrderingPreservesExpectation) {
  const DickeVector psi = coherent_state(5, 0.9, 2.2) + 0.3 * coherent_state(5, 2.0, 0.1);
  const DickeVector v = psi / psi.norm();
  const MomentEvaluator eval(v);
  const MomentOracle oracle = [&eval](std::span<const Axis> w) { return eval(w); };
  const P poly = z() * y() * x() + 2.0 * y() * z() * y() - I * x() * z() * x() * y();
  EXPECT_LT(std::abs(poly.evaluate(oracle) - poly.normal_ordered().evaluate(oracle)), 1e-12);
}

TEST(SpinPolynomial, GeneratorOfFirstMoments) {
  // d<J_x>/dt twist part: -(J_y J_z + J_z J_y); d<J_z>/dt decay part: -2 J_+ J_-.
  const GeneratorTerms gx = heisenberg_generator(x());
  EXPECT_TRUE(same(gx.twist, -1.0 * (y() * z() + z() * y())));
  const GeneratorTerms gz = heisenberg_generator(z());
  EXPECT_TRUE(gz.twist.empty());
  EXPECT_TRUE(same(gz.decay, -2.0 * P::raising() * P::lowering()));
  EXPECT_EQ(heisenberg_generator(x() * x()).twist.degree(), 3);
}
