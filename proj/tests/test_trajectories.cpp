#include "srpulse/errors.hpp"
#include "srpulse/lindblad.hpp"
#include "srpulse/rng.hpp"
#include "srpulse/spin_moments.hpp"
#include "srpulse/trajectories.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace srpulse;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<double> grid(double t_end, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (n - 1);
  return t;
}

TrajectoryConfig config(std::size_t m, std::vector<double> t, std::uint64_t seed = 1) {
  TrajectoryConfig c;
  c.n_trajectories = m;
  c.master_seed = seed;
  c.sample_times = std::move(t);
  return c;
}

}  // namespace

TEST(Philox, KnownAnswer) {
  Philox4x32 gen(0, 0);
  EXPECT_EQ(gen(), 0x6627e8d5u);
  EXPECT_EQ(gen(), 0xe169c58du);
  EXPECT_EQ(gen(), 0xbc57ac4cu);
  EXPECT_EQ(gen(), 0x9b00dbd8u);
}

TEST(Philox, StreamsDifferAndRepeat) {
  Philox4x32 a(7, 1), b(7, 2), c(7, 1);
  const auto x = a(), y = b(), z = c();
  EXPECT_NE(x, y);
  EXPECT_EQ(x, z);
  Philox4x32 u(3, 3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform_open_closed();
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(RateIntegrals, FixedAndScheduled) {
  const ModelParams p = ModelParams::create(10, 1.0, 5.0, 0.5);
  const RateIntegrals fixed(p, 2.0, 100.0, 5.0);
  EXPECT_NEAR(fixed.twist(12.0), 10.0 * p.twist_rate(), 1e-15);
  EXPECT_NEAR(fixed.decay(12.0), 10.0 * p.decay_rate(), 1e-15);
  EXPECT_NEAR(fixed.time_at_decay(10.0 * p.decay_rate(), 2.0), 12.0, 1e-12);
  EXPECT_TRUE(std::isinf(fixed.time_at_decay(1e9, 2.0)));

  const RampSchedule s = RampSchedule::create({10, 1.0, 5.0, 0.0, 0.2, 0.02, 50.0, 20.0});
  const RateIntegrals ramp(s, 0.0, 100.0, 1.0);
  // Trapezoid reference on a fine grid.
  double a = 0.0, b = 0.0;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) {
    const double t0 = 100.0 * i / steps, t1 = 100.0 * (i + 1) / steps;
    const ModelParams p0 = s.params_at(t0), p1 = s.params_at(t1);
    a += 0.5 * (t1 - t0) * (p0.twist_rate() + p1.twist_rate());
    b += 0.5 * (t1 - t0) * (p0.decay_rate() + p1.decay_rate());
  }
  EXPECT_NEAR(ramp.twist(100.0), a, 1e-8);
  EXPECT_NEAR(ramp.decay(100.0), b, 1e-8);
  const double t_half = ramp.time_at_decay(0.5 * b, 0.0);
  EXPECT_NEAR(ramp.decay(t_half), 0.5 * b, 1e-12);
}

TEST(RunTrajectory, DarkStateNeverJumps) {
  const ModelParams p = ModelParams::create(10, 1.0, 5.0, 0.5);
  const auto rec = run_trajectory(dicke_state(10, 10), p, 0.0, config(1, grid(100.0, 11)), 0);
  EXPECT_TRUE(rec.jump_times.empty());
  for (const auto& f : rec.first) EXPECT_EQ(f[2], -5.0);
}

TEST(RunTrajectory, UnitaryLimitMatchesPhases) {
  const int n = 12;
  const ModelParams p = ModelParams::create(n, 0.0, 5.0, 0.5);
  const DickeVector psi0 = coherent_state(n, 1.2, 0.4);
  TrajectoryConfig c = config(1, grid(200.0, 21));
  c.record_states = true;
  const auto rec = run_trajectory(psi0, p, 0.0, c, 3);
  EXPECT_TRUE(rec.jump_times.empty());
  const Eigen::VectorXd h = hamiltonian_diagonal(p);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    DickeVector expected = psi0;
    for (int k = 0; k <= n; ++k) expected(k) *= std::exp(cplx(0.0, -h(k) * rec.times[i]));
    EXPECT_NEAR(rec.states[i].norm(), 1.0, 1e-12);
    EXPECT_LT((rec.states[i] - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(RunTrajectory, SpinHalfWaitingTimesAreExponential) {
  const ModelParams p = ModelParams::create(1, 1.0, 0.0, 0.5);
  const double rate = 2.0 * p.eta() * 0.25;
  TrajectoryConfig c = config(10000, {0.0, 200.0}, 42);
  c.keep_records = true;
  const EnsembleResult r = ensemble_average(dicke_state(1, 0), p, 0.0, c, 2);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& rec : r.records) {
    ASSERT_EQ(rec.jump_times.size(), 1u);
    sum += rec.jump_times[0];
    sum2 += rec.jump_times[0] * rec.jump_times[0];
  }
  const double m = static_cast<double>(r.records.size());
  const double mean = sum / m;
  const double se = std::sqrt((sum2 / m - mean * mean) / (m - 1));
  EXPECT_LT(std::abs(mean - 1.0 / rate), 3.0 * se);
}

TEST(RunTrajectory, JumpAppliesLowering) {
  const ModelParams p = ModelParams::create(1, 1.0, 0.0, 0.5);
  TrajectoryConfig c = config(1, {0.0, 500.0});
  c.record_states = true;
  const auto rec = run_trajectory(dicke_state(1, 0), p, 0.0, c, 0);
  ASSERT_EQ(rec.jump_times.size(), 1u);
  EXPECT_NEAR(std::abs(rec.states[1](1)), 1.0, 1e-14);
  EXPECT_NEAR(rec.first[1][2], -0.5, 1e-14);
}

TEST(RunTrajectory, DeterministicPerIndex) {
  const ModelParams p = ModelParams::create(20, 1.0, 5.0, 0.5);
  const DickeVector psi0 = coherent_state(20, kPi / 10, kPi / 2);
  const auto c = config(1, grid(600.0, 11), 9);
  const auto a = run_trajectory(psi0, p, 0.0, c, 5);
  const auto b = run_trajectory(psi0, p, 0.0, c, 5);
  const auto other = run_trajectory(psi0, p, 0.0, c, 6);
  EXPECT_EQ(a.jump_times, b.jump_times);
  EXPECT_NE(a.jump_times, other.jump_times);
  EXPECT_GT(a.jump_times.size(), 5u);
}

TEST(RunTrajectory, RejectsUnnormalizedState) {
  const ModelParams p = ModelParams::create(4, 1.0, 5.0, 0.5);
  const DickeVector psi = 2.0 * coherent_state(4, 0.3, 0.0);
  EXPECT_THROW(run_trajectory(psi, p, 0.0, config(1, {0.0, 1.0}), 0), ConfigError);
}

TEST(EnsembleAverage, IndependentOfWorkerCount) {
  const ModelParams p = ModelParams::create(20, 1.0, 5.0, 0.5);
  const DickeVector psi0 = coherent_state(20, kPi / 10, kPi / 2);
  TrajectoryConfig c = config(64, grid(150.0, 16), 123);
  c.record_second_moments = true;
  const EnsembleResult one = ensemble_average(psi0, p, 0.0, c, 1);
  const EnsembleResult four = ensemble_average(psi0, p, 0.0, c, 4);
  EXPECT_EQ(one.mean, four.mean);
  EXPECT_EQ(one.standard_error, four.standard_error);
  EXPECT_EQ(one.second_mean, four.second_mean);
  EXPECT_EQ(one.jump_counts, four.jump_counts);
}

TEST(EnsembleAverage, AgreesWithMasterEquation) {
  const int n = 20;
  const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
  const DickeVector psi0 = coherent_state(n, kPi / 10, kPi / 2);
  const auto t = grid(300.0, 31);
  TrajectoryConfig c = config(2000, t, 2024);
  c.record_states = true;
  const EnsembleResult r = ensemble_average(psi0, p, 0.0, c);
  std::size_t i = 0;
  evolve(projector(psi0), p, 0.0, t, [&](double, const DensityMatrix& rho) {
    const FirstMoments f = MomentEvaluator(rho).first();
    for (int j = 0; j < 3; ++j) {
      const double se = r.standard_error[i][static_cast<std::size_t>(j)];
      EXPECT_LE(std::abs(r.mean[i][static_cast<std::size_t>(j)] - f[static_cast<std::size_t>(j)].real()),
                3.0 * se + 1e-9)
          << "t=" << t[i] << " axis " << j;
    }
    EXPECT_NEAR(r.density[i].trace().real(), 1.0, 1e-12);
    ++i;
  });
}

TEST(EnsembleAverage, ErrorShrinksWithEnsembleSize) {
  const int n = 20;
  const ModelParams p = ModelParams::create(n, 1.0, 5.0, 0.5);
  const DickeVector psi0 = coherent_state(n, kPi / 10, kPi / 2);
  const auto t = grid(300.0, 16);
  std::vector<double> exact;
  evolve(projector(psi0), p, 0.0, t,
         [&](double, const DensityMatrix& rho) { exact.push_back(MomentEvaluator(rho).first()[2].real()); });
  std::vector<double> err;
  for (std::size_t m : {500u, 2000u, 8000u}) {
    const EnsembleResult r = ensemble_average(psi0, p, 0.0, config(m, t, 77));
    double e = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) e += std::pow(r.mean[i][2] - exact[i], 2);
    err.push_back(std::sqrt(e / static_cast<double>(t.size())));
  }
  EXPECT_LT(err[2], err[0]);
  EXPECT_LT(err[2], 0.75 * err[0]);
}
