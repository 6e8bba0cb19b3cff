#include "oracles.hpp"
#include "srpulse/cumulant.hpp"
#include "srpulse/errors.hpp"
#include "srpulse/lindblad.hpp"
#include "srpulse/observables.hpp"
#include "srpulse/trajectories.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <numbers>
#include <random>

using namespace srpulse;
constexpr double kPi = std::numbers::pi;

namespace {

DickeVector random_state(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d;
  DickeVector v(n + 1);
  for (int p = 0; p <= n; ++p) v(p) = cplx(d(gen), d(gen));
  return v / v.norm();
}

// General SU(2) rotation exp(-i a J_z) exp(-i b J_y) from dense exponentials.
DensityMatrix rotate(const DensityMatrix& rho, double a, double b) {
  const int n = static_cast<int>(rho.rows()) - 1;
  const auto ops = oracle::cartesian_from_scratch(n);
  Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(ops[1]);
  const OperatorMatrix ry = es.eigenvectors() *
                            (es.eigenvalues().cast<cplx>() * cplx(0.0, -b)).array().exp().matrix().asDiagonal() *
                            es.eigenvectors().adjoint();
  const DensityMatrix r = ry * rho * ry.adjoint();
  return rotated_about_z(r, a);
}

}  // namespace

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const GaussLegendre gl = gauss_legendre(6);
  EXPECT_NEAR(gl.weights.sum(), 2.0, 1e-14);
  for (int k = 0; k <= 11; ++k) {
    const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
    EXPECT_NEAR((gl.weights.array() * gl.nodes.array().pow(k)).sum(), exact, 1e-14) << k;
  }
}

TEST(QFunction, CoherentStateExamples) {
  const int n = 12;
  const double th = 1.0, ph = 2.0;
  const DensityMatrix rho = projector(coherent_state(n, th, ph));
  const QGrid q = q_function(rho, 25, 26);
  // Evaluate at the exact point via a one-row overlap.
  const DickeVector c = coherent_state(n, th, ph);
  EXPECT_NEAR((c.adjoint() * rho * c)(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(q.normalization(), 1.0, 1e-12);
  EXPECT_LE(q.values.maxCoeff(), 1.0);
  EXPECT_GE(q.values.minCoeff(), 0.0);
}

TEST(QFunction, PeakAndAntipode) {
  for (int n : {4, 10, 20}) {
    // Place the coherent state on a grid node so both Q = 1 and Q = 0 are sampled.
    const QGrid probe = q_function(projector(dicke_state(n, 0)), 2 * n + 1, 2 * n + 2);
    const int it = 3;
    const int ip = 5;
    const double th = probe.theta(it), ph = probe.phi(ip);
    const QGrid q = q_function(coherent_state(n, th, ph), 2 * n + 1, 2 * n + 2);
    EXPECT_NEAR(q.values(it, ip), 1.0, 1e-12);
    const int anti_t = 2 * n - it;
    const int anti_p = (ip + n + 1) % (2 * n + 2);
    EXPECT_NEAR(q.theta(anti_t), kPi - th, 1e-12);
    EXPECT_LT(q.values(anti_t, anti_p), 1e-12);
  }
}

TEST(QFunction, MaximallyMixed) {
  const int n = 9;
  const DensityMatrix rho = DensityMatrix::Identity(n + 1, n + 1) / double(n + 1);
  const QGrid q = q_function(rho);
  EXPECT_EQ(q.theta.size(), 2 * n + 1);
  EXPECT_EQ(q.phi.size(), 2 * n + 2);
  EXPECT_LT((q.values.array() - 1.0 / (n + 1)).abs().maxCoeff(), 1e-13);
}

TEST(QFunction, MatchesDirectOverlapsAndNormalizes) {
  const int n = 7;
  const DickeVector psi = random_state(n, 4);
  const QGrid q = q_function(psi, 15, 16);
  for (int i = 0; i < q.theta.size(); ++i) {
    for (int j = 0; j < q.phi.size(); ++j) {
      const cplx ov = coherent_state(n, q.theta(i), q.phi(j)).dot(psi);
      EXPECT_NEAR(q.values(i, j), std::norm(ov), 1e-12);
    }
  }
  EXPECT_NEAR(q.normalization(), 1.0, 1e-12);
  EXPECT_THROW(q_function(psi, 4, 16), ConfigError);
}

TEST(QFunction, Serialization) {
  const QGrid q = q_function(coherent_state(3, 0.5, 0.0), 8, 8);
  const std::string csv = q.to_csv();
  EXPECT_EQ(csv.rfind("theta,phi,q\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);
  const auto j = nlohmann::json::parse(q.to_json());
  EXPECT_EQ(j["n_atoms"], 3);
  EXPECT_EQ(j["values"].size(), 8u);
  EXPECT_EQ(j["values"][0].size(), 8u);
}

TEST(ChiSquared, CoherentStatesAreIsotropic) {
  for (double th : {0.3, 1.2, 2.5}) {
    for (double ph : {0.0, 1.0, 4.0}) {
      const Deformation d = chi_squared(coherent_state(50, th, ph));
      EXPECT_NEAR(d.chi2, 1.0, 1e-8);
      EXPECT_NEAR(d.variance_max, 12.5, 1e-8);
    }
  }
}

TEST(ChiSquared, SqueezedCovariance) {
  // Mean along z at the pole: theta-hat = x, phi-hat = y.
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  cov(0, 0) = 4.0;
  cov(1, 1) = 1.0;
  const Deformation d = chi_squared({1e-20, 0.0, 5.0}, cov, 10);
  EXPECT_NEAR(d.chi2, 4.0, 1e-12);
  EXPECT_NEAR(d.phi_max, 0.0, 1e-12);
  EXPECT_NEAR(d.phi_min, kPi / 2, 1e-12);
  EXPECT_THROW(chi_squared({0.0, 0.0, 0.0}, cov, 10), NumericalError);
}

TEST(ChiSquared, InvariantUnderRotationAboutZ) {
  const int n = 10;
  DensityMatrix rho;
  evolve(projector(coherent_state(n, 1.0, 0.3)), ModelParams::create(n, 1.0, 5.0, 0.5), 0.0,
         std::vector<double>{0.0, 30.0}, [&](double, const DensityMatrix& r) { rho = r; });
  const Deformation a = chi_squared(rho);
  const Deformation b = chi_squared(rotated_about_z(rho, 0.9));
  EXPECT_GT(a.chi2, 1.01);
  EXPECT_NEAR(a.chi2, b.chi2, 1e-9);
}

TEST(ChiSquared, MomentStateAgrees) {
  const DickeVector psi = random_state(6, 8);
  const Deformation a = chi_squared(psi);
  const Deformation b = chi_squared(MomentState::from_state(psi), 6);
  EXPECT_NEAR(a.chi2, b.chi2, 1e-10);
}

TEST(ThirdMoments, MatchDenseOracle) {
  const int n = 6;
  const auto ops = oracle::cartesian_from_scratch(n);
  for (const DensityMatrix& rho : {projector(dicke_state(n, 0)), projector(random_state(n, 1))}) {
    const ThirdMoments m = moments_third(rho);
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
          const Axis w[3] = {kAxes[std::size_t(j)], kAxes[std::size_t(k)], kAxes[std::size_t(l)]};
          EXPECT_LT(std::abs(m[third_index(j, k, l)] - oracle::dense_moment(ops, rho, w)), 1e-12);
          EXPECT_LT(std::abs(m[third_index(j, k, l)] - std::conj(m[third_index(l, k, j)])), 1e-12);
        }
      }
    }
  }
}

TEST(ThirdCumulants, DeterministicJz) {
  const DickeVector state = dicke_state(8, 3);
  const MomentEvaluator eval(state);
  const ThirdMoments c = third_cumulants(eval.first(), eval.second(), eval.third());
  EXPECT_LT(std::abs(c[third_index(2, 2, 2)]), 1e-13);
}

namespace {
double brute_c_total(const DensityMatrix& rho, int order) {
  const int n = static_cast<int>(rho.rows()) - 1;
  const auto ops = oracle::cartesian_from_scratch(n);
  auto mu = [&](const std::vector<Axis>& w) { return oracle::dense_moment(ops, rho, w); };
  double total = 0.0;
  const int count = order == 2 ? 9 : 27;
  for (int idx = 0; idx < count; ++idx) {
    std::vector<Axis> w;
    for (int d = order - 1, r = idx; d >= 0; --d, r /= 3) w.insert(w.begin(), kAxes[std::size_t(r % 3)]);
    total += std::abs(oracle::recursive_cumulant(mu, w));
  }
  return total;
}
}  // namespace

TEST(CTotal, MatchesBruteForce) {
  for (int n = 1; n <= 10; ++n) {
    for (const DickeVector& psi : {dicke_state(n, n), coherent_state(n, 0.7, 1.3), random_state(n, 30u + n)}) {
      const DensityMatrix rho = projector(psi);
      EXPECT_NEAR(c_total(rho, 2), brute_c_total(rho, 2), 1e-10);
      EXPECT_NEAR(c_total(psi, 2), brute_c_total(rho, 2), 1e-10);
      EXPECT_NEAR(c_total(rho, 3), brute_c_total(rho, 3), 1e-10);
    }
    EXPECT_GT(c_total(projector(coherent_state(n, 0.7, 1.3)), 2), 0.0);
  }
  EXPECT_THROW(c_total(projector(dicke_state(3, 0)), 4), std::invalid_argument);
}

TEST(CTotal, CoherentStatesAreSubleading) {
  // Ordered third cumulants of a coherent state are commutator remnants of
  // order N, so C3/N^3 falls like 1/N^2.
  for (int n : {2, 10, 100}) {
    const double pole = c_total(projector(dicke_state(n, n)), 3);
    const double tilted = c_total(coherent_state(n, 0.9, 0.5), 3);
    EXPECT_LE(pole, 2.0 * n) << n;
    EXPECT_LE(tilted, 3.0 * n) << n;
  }
}

TEST(CTotal, InvariantUnderQuarterTurnsAboutZ) {
  // A sum of absolute Cartesian components is unchanged when a rotation only
  // permutes axes up to sign; generic angles mix components.
  const DensityMatrix rho = projector(random_state(8, 21));
  for (int k = 1; k < 4; ++k) {
    const DensityMatrix r = rotated_about_z(rho, k * kPi / 2);
    EXPECT_NEAR(c_total(rho, 2), c_total(r, 2), 1e-10);
    EXPECT_NEAR(c_total(rho, 3), c_total(r, 3), 1e-10);
  }
}

TEST(CnSymmetrized, Examples) {
  const DickeVector state = dicke_state(6, 2);
  const MomentEvaluator eigen(state);
  const Axis zz[2] = {Axis::Z, Axis::Z};
  EXPECT_LT(std::abs(cumulant_from_moments([&](std::span<const Axis> w) { return eigen(w); }, zz)), 1e-13);
  EXPECT_THROW(cn_total_symmetrized(projector(dicke_state(3, 0)), 5), std::invalid_argument);
}

TEST(CnSymmetrized, ThirdOrderMatchesEnumeration) {
  const int n = 4;
  const DickeVector psi = random_state(n, 5);
  const DensityMatrix rho = projector(psi);
  const auto ops = oracle::cartesian_from_scratch(n);
  auto sym = [&](std::vector<Axis> w) {
    std::sort(w.begin(), w.end());
    cplx s = 0.0;
    int count = 0;
    do {
      s += oracle::dense_moment(ops, rho, w);
      ++count;
    } while (std::next_permutation(w.begin(), w.end()));
    return s / double(count);
  };
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      for (int c = b; c < 3; ++c) {
        const std::vector<Axis> w = {kAxes[std::size_t(a)], kAxes[std::size_t(b)], kAxes[std::size_t(c)]};
        const cplx k = oracle::recursive_cumulant(sym, w);
        total += std::abs(6.0 * k);
      }
    }
  }
  EXPECT_NEAR(cn_total_symmetrized(rho, 3), total, 1e-10);
}

TEST(CnSymmetrized, SubleadingWithOrderedSumOnCoherentStates) {
  for (int n : {2, 10, 100}) {
    const DickeVector psi = coherent_state(n, 0.9, 0.5);
    const MomentEvaluator eval(psi);
    EXPECT_LE(cn_total_symmetrized(eval, 3), 3.0 * n) << n;
    EXPECT_LE(c_total(eval, 3), 3.0 * n) << n;
  }
}

TEST(CnSymmetrized, InvariantUnderAxisPermutingRotations) {
  const DensityMatrix rho = projector(random_state(6, 13));
  for (const auto& [a, b] : {std::pair{kPi / 2, 0.0}, std::pair{0.0, kPi / 2}, std::pair{kPi / 2, kPi / 2},
                             std::pair{kPi, kPi}}) {
    const DensityMatrix r = rotate(rho, a, b);
    for (int order : {2, 3, 4}) {
      EXPECT_NEAR(cn_total_symmetrized(rho, order), cn_total_symmetrized(r, order), 1e-9) << a << " " << b;
    }
  }
}

TEST(CnSymmetrized, GenericRotationsMixComponents) {
  const DensityMatrix rho = projector(random_state(6, 13));
  const DensityMatrix r = rotate(rho, 0.7, 1.3);
  // Only the rotation-invariant part is preserved: the Frobenius norm of
  // the symmetrized cumulant tensor, not the sum of absolute components.
  auto frobenius = [](const DensityMatrix& x) {
    const auto ops = oracle::cartesian_from_scratch(static_cast<int>(x.rows()) - 1);
    double f = 0.0;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const Axis w1[2] = {kAxes[std::size_t(a)], kAxes[std::size_t(b)]};
        const Axis w2[2] = {kAxes[std::size_t(b)], kAxes[std::size_t(a)]};
        const Axis wa[1] = {kAxes[std::size_t(a)]}, wb[1] = {kAxes[std::size_t(b)]};
        const cplx c = 0.5 * (oracle::dense_moment(ops, x, w1) + oracle::dense_moment(ops, x, w2)) -
                       oracle::dense_moment(ops, x, wa) * oracle::dense_moment(ops, x, wb);
        f += std::norm(c);
      }
    }
    return f;
  };
  EXPECT_NEAR(frobenius(rho), frobenius(r), 1e-9);
}

TEST(CorrelationReport, EnsembleReconstructionMatchesMaster) {
  const int n = 8;
  const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
  const DickeVector psi0 = coherent_state(n, kPi / 6, 0.0);
  const std::vector<double> t = {0.0, 40.0};
  TrajectoryConfig c;
  c.n_trajectories = 4000;
  c.master_seed = 99;
  c.sample_times = t;
  c.record_states = true;
  const EnsembleResult ens = ensemble_average(psi0, p, 0.0, c);
  DensityMatrix rho;
  evolve(projector(psi0), p, 0.0, t, [&](double, const DensityMatrix& r) { rho = r; });
  const CorrelationReport a = correlation_report(rho);
  const CorrelationReport b = correlation_report(ens.density[1]);
  EXPECT_NEAR(a.c2_total, b.c2_total, 0.05 * a.c2_total);
  EXPECT_NEAR(a.c3_total, b.c3_total, 0.1 * a.c3_total);
  EXPECT_NEAR(a.deformation.chi2, b.deformation.chi2, 0.1 * a.deformation.chi2);
}
