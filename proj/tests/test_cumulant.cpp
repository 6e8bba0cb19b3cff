#include "oracles.hpp"
#include "srpulse/cumulant.hpp"
#include "srpulse/errors.hpp"
#include "srpulse/lindblad.hpp"
#include "srpulse/meanfield.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace srpulse;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (n - 1);
  return t;
}

DickeVector random_state(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d;
  DickeVector v(n + 1);
  for (int p = 0; p <= n; ++p) v(p) = cplx(d(gen), d(gen));
  return v / v.norm();
}

MomentOracle oracle_of(const MomentEvaluator& eval) {
  return [&eval](std::span<const Axis> w) { return eval(w); };
}

}  // namespace

TEST(MomentState, FromStateMatchesMatrices) {
  const DickeVector psi = random_state(6, 3);
  const auto ops = oracle::cartesian_from_scratch(6);
  const DensityMatrix rho = projector(psi);
  const MomentState s = MomentState::from_state(psi);
  for (int j = 0; j < 3; ++j) {
    const Axis a[1] = {kAxes[static_cast<std::size_t>(j)]};
    EXPECT_NEAR(s.first[static_cast<std::size_t>(j)], oracle::dense_moment(ops, rho, a).real(), 1e-12);
    for (int k = 0; k < 3; ++k) {
      const Axis w[2] = {kAxes[static_cast<std::size_t>(j)], kAxes[static_cast<std::size_t>(k)]};
      EXPECT_LT(std::abs(s.ordered(j, k) - oracle::dense_moment(ops, rho, w)), 1e-12);
    }
  }
  EXPECT_NEAR(s.casimir(), 3.0 * 4.0, 1e-11);
  const MomentState back = MomentState::from_vector(s.to_vector());
  EXPECT_EQ(back.first, s.first);
  EXPECT_EQ(back.second, s.second);
}

TEST(MomentState, CoherentConnectedCumulants) {
  const int n = 40;
  const DickeVector psi = coherent_state(n, 1.1, 0.4);
  const MomentState s = MomentState::from_state(psi);
  const MomentEvaluator eval(psi);
  const SecondMoments exact = eval.second();
  const FirstMoments f = eval.first();
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      const cplx c = exact[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
                     f[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(k)];
      EXPECT_LT(std::abs(s.connected(j, k) - c), 1e-9 * n);
    }
  }
}

TEST(Closure3, Examples) {
  MomentState zero;
  zero.second = {1.0, 0.2, 0.3, 1.5, 0.1, 2.0};
  for (const cplx& v : closure3(zero)) EXPECT_EQ(std::abs(v), 0.0);

  MomentState det;
  det.first = {0.0, 0.0, 1.7};
  det.second = {0.0, 0.0, 0.0, 0.0, 0.0, 1.7 * 1.7};
  EXPECT_NEAR(closure3(det)[third_index(2, 2, 2)].real(), 1.7 * 1.7 * 1.7, 1e-12);
}

TEST(Closure3, CoherentStateWithinTrueCumulant) {
  const DickeVector psi = coherent_state(4, kPi / 3, 1.0);
  const auto ops = oracle::cartesian_from_scratch(4);
  const DensityMatrix rho = projector(psi);
  const MomentEvaluator eval(psi);
  const ThirdMoments closed = closure3(MomentState::from_state(psi));
  const Axis xyz[3] = {Axis::X, Axis::Y, Axis::Z};
  const cplx exact = oracle::dense_moment(ops, rho, xyz);
  const cplx kappa3 = oracle::recursive_cumulant(
      [&](const std::vector<Axis>& w) { return eval(w); }, std::vector<Axis>{Axis::X, Axis::Y, Axis::Z});
  EXPECT_LE(std::abs(closed[third_index(0, 1, 2)] - exact), std::abs(kappa3) + 1e-12);
}

TEST(MomentRhs, SouthPoleIsStationary) {
  for (int n : {1, 4, 50}) {
    const MomentState s = MomentState::from_state(dicke_state(n, n));
    const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
    const Eigen::VectorXd d = moment_rhs(s, p).to_vector();
    EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12 * n * n) << n;
  }
}

TEST(MomentRhs, UnclosedMatchesLindbladOracle) {
  for (int n : {2, 3, 6}) {
    const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
    const DickeVector psi = n == 2 ? coherent_state(2, kPi / 10, kPi / 2) : random_state(n, 7u + n);
    const DensityMatrix rho = projector(psi);
    const DensityMatrix drho = lindblad_rhs(rho, p);
    const MomentEvaluator eval(psi);
    const auto rhs = moment_rhs_unclosed(oracle_of(eval), p);
    const auto ops = oracle::cartesian_from_scratch(n);
    for (int j = 0; j < 3; ++j) {
      const cplx exact = (ops[static_cast<std::size_t>(j)] * drho).trace();
      EXPECT_LT(std::abs(rhs[static_cast<std::size_t>(j)] - exact.real()), 1e-10) << n << " " << j;
    }
    int slot = 3;
    for (int j = 0; j < 3; ++j) {
      for (int k = j; k < 3; ++k, ++slot) {
        const OperatorMatrix op = ops[static_cast<std::size_t>(j)] * ops[static_cast<std::size_t>(k)];
        const double exact = (op * drho).trace().real();
        EXPECT_LT(std::abs(rhs[static_cast<std::size_t>(slot)].real() - exact), 1e-10) << n << " " << slot;
      }
    }
  }
}

TEST(MomentRhs, FirstMomentBlockNeedsNoClosure) {
  const DickeVector psi = random_state(8, 11);
  const MomentState s = MomentState::from_state(psi);
  const ModelParams p = ModelParams::create(8, 1.0, 2.0, 0.7);
  const ThirdMoments closed = closure3(s);
  const MomentOracle oracle = [&](std::span<const Axis> w) -> cplx {
    switch (w.size()) {
      case 0: return 1.0;
      case 1: return s.first[static_cast<std::size_t>(index_of(w[0]))];
      case 2: return s.ordered(index_of(w[0]), index_of(w[1]));
      case 3: return closed[third_index(index_of(w[0]), index_of(w[1]), index_of(w[2]))];
      default: throw std::logic_error("unexpected order");
    }
  };
  const auto unclosed = moment_rhs_unclosed(oracle, p);
  const Eigen::VectorXd closed_rhs = moment_rhs(s, p).to_vector();
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(unclosed[static_cast<std::size_t>(i)].real(), closed_rhs(i), 1e-12);
}

TEST(MomentRhs, FactorizedMatchesMeanField) {
  const ModelParams p = ModelParams::create(30, 1.0, 5.0, 0.5);
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> th(0.05, kPi - 0.05), ph(0.0, 2 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const BlochAngles a{th(gen), ph(gen)};
    const double r = 0.5 * p.n_atoms();
    const std::array<double, 3> j = {r * std::sin(a.theta) * std::cos(a.phi), r * std::sin(a.theta) * std::sin(a.phi),
                                     r * std::cos(a.theta)};
    const auto rhs = moment_rhs_unclosed(factorized_oracle(j), p);
    const AngleRates d = meanfield_rhs(a, p);
    const std::array<double, 3> expected = {
        r * (std::cos(a.theta) * std::cos(a.phi) * d.dtheta - std::sin(a.theta) * std::sin(a.phi) * d.dphi),
        r * (std::cos(a.theta) * std::sin(a.phi) * d.dtheta + std::sin(a.theta) * std::cos(a.phi) * d.dphi),
        -r * std::sin(a.theta) * d.dtheta};
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(rhs[static_cast<std::size_t>(i)].real(), expected[static_cast<std::size_t>(i)], 1e-12 * r);
    }
  }
}

TEST(MomentRhs, DerivativesAreRealAndConserveCasimir) {
  const DickeVector psi = random_state(12, 2);
  const MomentState s = MomentState::from_state(psi);
  const ModelParams p = ModelParams::create(12, 1.0, 3.0, 0.5);
  const MomentState d = moment_rhs(s, p);
  EXPECT_NEAR(d.casimir(), 0.0, 1e-12);
  const auto unclosed = moment_rhs_unclosed(oracle_of(MomentEvaluator(psi)), p);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(unclosed[static_cast<std::size_t>(i)].imag(), 0.0, 1e-12);
}

TEST(MomentRhs, InversionTimeReversalHoldsToLeadingOrder) {
  // Reflection R: <J_z>, <J_x J_z>, <J_y J_z> change sign. Invariance means
  // f(R s) = -R f(s); the residual relative to |f| should fall like 1/N.
  auto residual = [](int n) {
    const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
    const MomentState s = MomentState::from_state(coherent_state(n, 0.8, 0.3));
    auto reflect = [](MomentState m) {
      m.first[2] = -m.first[2];
      m.second[2] = -m.second[2];
      m.second[4] = -m.second[4];
      return m;
    };
    const Eigen::VectorXd lhs = moment_rhs(reflect(s), p).to_vector();
    const Eigen::VectorXd rhs = -reflect(moment_rhs(s, p)).to_vector();
    return (lhs - rhs).norm() / rhs.norm();
  };
  const double r50 = residual(50);
  const double r400 = residual(400);
  EXPECT_LT(r400, 0.25 * r50);
  EXPECT_LT(r400, 0.05);
}

TEST(IntegrateCumulant2, SouthPoleIsConstant) {
  const ModelParams p = ModelParams::create(20, 1.0, 5.0, 0.5);
  const auto traj = integrate_cumulant2(dicke_state(20, 20), p, 0.0, grid(50.0, 11));
  for (const auto& s : traj.states) {
    EXPECT_NEAR(s.first[2], -10.0, 1e-10);
    EXPECT_NEAR(s.second[5], 100.0, 1e-9);
  }
}

TEST(IntegrateCumulant2, CasimirConserved) {
  const int n = 200;
  const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
  const auto traj = integrate_cumulant2(coherent_state(n, kPi / 10, kPi / 2), p, 0.0, grid(600.0, 121));
  const double casimir = 0.25 * n * (n + 2);
  for (const auto& s : traj.states) EXPECT_NEAR(s.casimir(), casimir, 1e-6 * n * n);
}

TEST(IntegrateCumulant2, CovarianceStaysPositive) {
  const int n = 100;
  const ModelParams p = ModelParams::create(n, 1.0, 0.0, 0.5);
  const auto traj = integrate_cumulant2(coherent_state(n, kPi / 10, 0.0), p, 0.0, grid(40.0, 81));
  for (const auto& s : traj.states) {
    Eigen::Matrix3d c;
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) c(j, k) = s.symmetric(j, k) - s.first[j] * s.first[k];
    }
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(c).eigenvalues().minCoeff(), -1e-8 * n * n);
  }
}

TEST(IntegrateCumulant2, ForcedFactorizationIsMeanField) {
  const int n = 200;
  const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
  const auto t = grid(400.0, 81);
  const double tol = 1e-9;
  Cumulant2Options opt;
  opt.tol = tol;
  opt.force_factorization = true;
  const auto cum = integrate_cumulant2(coherent_state(n, kPi / 10, kPi / 2), p, 0.0, t, opt);
  const auto mf = integrate_meanfield({kPi / 10, kPi / 2}, p, 0.0, t, tol);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto b = mf.bloch(i);
    for (int j = 0; j < 3; ++j) {
      EXPECT_NEAR(cum.states[i].first[static_cast<std::size_t>(j)] / n, b[static_cast<std::size_t>(j)], 10 * tol);
    }
  }
}

TEST(IntegrateCumulant2, DissipativePulseTracksMasterEquation) {
  const int n = 200;
  const ModelParams p = ModelParams::create(n, 1.0, 0.0, 0.5);
  const DickeVector psi = coherent_state(n, kPi / 10, kPi / 2);
  const auto t = grid(40.0, 81);
  const auto cum = integrate_cumulant2(psi, p, 0.0, t);
  std::vector<double> jz;
  evolve(projector(psi), p, 0.0, t, [&](double, const DensityMatrix& rho) {
    jz.push_back(MomentEvaluator(rho).first()[2].real());
  });
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_NEAR(cum.states[i].first[2], jz[i], 0.01 * n / 2) << t[i];
}

TEST(IntegrateCumulant2, Errors) {
  const ModelParams p = ModelParams::create(10, 1.0, 5.0, 0.5);
  const auto t = grid(1.0, 3);
  EXPECT_THROW(integrate_cumulant2(coherent_state(11, 0.3, 0.0), p, 0.0, t), DimensionError);
  Cumulant2Options bad;
  bad.tol = 0.5;
  EXPECT_THROW(integrate_cumulant2(coherent_state(10, 0.3, 0.0), p, 0.0, t, bad), ConfigError);
}

TEST(CumulantFromMoments, Examples) {
  const DickeVector psi = random_state(5, 9);
  const MomentEvaluator eval(psi);
  const MomentOracle o = oracle_of(eval);
  const Axis a1[1] = {Axis::Y};
  EXPECT_LT(std::abs(cumulant_from_moments(o, a1) - eval(a1)), 1e-14);

  const MomentOracle centered = [](std::span<const Axis> w) -> cplx {
    if (w.size() == 1) return 0.0;
    return cplx(0.3 * static_cast<double>(w.size()), 0.1);
  };
  const Axis a2[2] = {Axis::X, Axis::Z};
  EXPECT_LT(std::abs(cumulant_from_moments(centered, a2) - centered(a2)), 1e-15);

  const DickeVector coh = coherent_state(3, kPi / 4, 0.0);
  const auto ops = oracle::cartesian_from_scratch(3);
  const DensityMatrix rho = projector(coh);
  auto mu = [&](std::vector<Axis> w) { return oracle::dense_moment(ops, rho, w); };
  const cplx x = mu({Axis::X}), y = mu({Axis::Y}), z = mu({Axis::Z});
  const cplx expected = mu({Axis::X, Axis::Y, Axis::Z}) - x * mu({Axis::Y, Axis::Z}) - y * mu({Axis::X, Axis::Z}) -
                        z * mu({Axis::X, Axis::Y}) + 2.0 * x * y * z;
  const MomentEvaluator ceval(coh);
  const Axis xyz[3] = {Axis::X, Axis::Y, Axis::Z};
  EXPECT_LT(std::abs(cumulant_from_moments(oracle_of(ceval), xyz) - expected), 1e-12);
}

TEST(CumulantFromMoments, MatchesRecursiveOracle) {
  std::mt19937 gen(17);
  std::normal_distribution<double> d;
  for (int trial = 0; trial < 10; ++trial) {
    // Random moment table keyed by word; the relation is purely combinatorial.
    std::map<std::vector<Axis>, cplx> table;
    const MomentOracle mu = [&](std::span<const Axis> w) {
      const std::vector<Axis> key(w.begin(), w.end());
      auto it = table.find(key);
      if (it == table.end()) it = table.emplace(key, cplx(d(gen), d(gen))).first;
      return it->second;
    };
    for (int n = 1; n <= 4; ++n) {
      std::vector<Axis> ops;
      for (int i = 0; i < n; ++i) ops.push_back(kAxes[static_cast<std::size_t>((trial + i * 2) % 3)]);
      const cplx direct = cumulant_from_moments(mu, ops);
      const cplx rec = oracle::recursive_cumulant([&](const std::vector<Axis>& w) { return mu(w); }, ops);
      EXPECT_LT(std::abs(direct - rec), 1e-12 * std::max(1.0, std::abs(rec))) << n;
    }
  }
}

TEST(CumulantFromMoments, RejectsUnsupportedOrder) {
  const MomentOracle mu = [](std::span<const Axis>) { return cplx(1.0); };
  EXPECT_THROW(cumulant_from_moments(mu, std::span<const Axis>{}), std::invalid_argument);
  const std::vector<Axis> five(5, Axis::X);
  EXPECT_THROW(cumulant_from_moments(mu, five), std::invalid_argument);
}
