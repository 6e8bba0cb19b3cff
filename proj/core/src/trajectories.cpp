#include "srpulse/trajectories.hpp"

#include "srpulse/errors.hpp"
#include "srpulse/parallel.hpp"
#include "srpulse/rng.hpp"
#include "srpulse/spin_moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace srpulse {

namespace {

constexpr double kNormFloor = 1e-12;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290,
                                            0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873,
                                              0.2223810344533745, 0.1012285362903763};

}  // namespace

RateIntegrals::RateIntegrals(const Drive& drive, double t0, double t_end, double max_panel)
    : drive_(drive), constant_(std::holds_alternative<ModelParams>(drive)), t0_(t0), t_end_(t_end) {
  if (!(t_end >= t0)) throw ConfigError("RateIntegrals: t_end before t0");
  if (constant_) return;
  std::vector<double> cuts = {t0};
  for (double b : breakpoints(drive)) {
    if (b > t0 && b < t_end) cuts.push_back(b);
  }
  cuts.push_back(t_end);
  const double width_cap = std::min(max_panel, std::max(1e-300, (t_end - t0) / 1024.0));
  nodes_.push_back(t0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double span = cuts[i + 1] - cuts[i];
    if (span <= 0.0) continue;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(span / width_cap)));
    for (std::size_t k = 1; k <= panels; ++k) {
      nodes_.push_back(k == panels ? cuts[i + 1]
                                   : cuts[i] + span * static_cast<double>(k) / static_cast<double>(panels));
    }
  }
  cumulative_.push_back({0.0, 0.0});
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    const auto part = panel_integral(nodes_[i - 1], nodes_[i]);
    cumulative_.push_back({cumulative_.back()[0] + part[0], cumulative_.back()[1] + part[1]});
  }
}

std::array<double, 2> RateIntegrals::panel_integral(double a, double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 2> acc{0.0, 0.0};
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    for (double sign : {-1.0, 1.0}) {
      const ModelParams p = params_at(drive_, mid + sign * half * kGlNodes[i]);
      acc[0] += kGlWeights[i] * p.twist_rate();
      acc[1] += kGlWeights[i] * p.decay_rate();
    }
  }
  return {acc[0] * half, acc[1] * half};
}

std::array<double, 2> RateIntegrals::integral_to(double t) const {
  if (constant_) {
    const ModelParams& p = std::get<ModelParams>(drive_);
    return {p.twist_rate() * (t - t0_), p.decay_rate() * (t - t0_)};
  }
  t = std::clamp(t, t0_, t_end_);
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  const std::size_t i = static_cast<std::size_t>(std::distance(nodes_.begin(), it)) - 1;
  if (i + 1 >= nodes_.size() || t == nodes_[i]) return cumulative_[std::min(i, cumulative_.size() - 1)];
  const auto part = panel_integral(nodes_[i], t);
  return {cumulative_[i][0] + part[0], cumulative_[i][1] + part[1]};
}

double RateIntegrals::twist(double t) const { return integral_to(t)[0]; }
double RateIntegrals::decay(double t) const { return integral_to(t)[1]; }

double RateIntegrals::time_at_decay(double b, double t_lo) const {
  if (constant_) {
    const double g = std::get<ModelParams>(drive_).decay_rate();
    if (g <= 0.0) return std::numeric_limits<double>::infinity();
    const double t = std::max(t0_ + b / g, t_lo);
    return t <= t_end_ ? t : std::numeric_limits<double>::infinity();
  }
  if (decay(t_end_) < b) return std::numeric_limits<double>::infinity();
  double lo = t_lo;
  double hi = t_end_;
  if (decay(lo) >= b) return lo;
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (decay(mid) >= b) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

namespace {

struct Ladder {
  std::vector<double> twist_coef;  // N^2/4 - m^2
  std::vector<double> d;           // diagonal of J_+J_-
  std::vector<double> s;           // lowering coefficients
};

Ladder ladder_of(int n) {
  Ladder l;
  const double quarter = 0.25 * n * static_cast<double>(n);
  for (int p = 0; p <= n; ++p) {
    const double m = magnetic_number(n, p);
    l.twist_coef.push_back(quarter - m * m);
  }
  for (int p = 0; p < n; ++p) l.s.push_back(lowering_coefficient(n, p));
  for (int p = 0; p < n; ++p) l.d.push_back(l.s[p] * l.s[p]);
  l.d.push_back(0.0);
  return l;
}

// Increment x of B such that sum_p w_p exp(-2 x d_p) == r, or +inf.
double decay_to_threshold(const std::vector<double>& w, const std::vector<double>& d, double r,
                          double rel_tol) {
  auto norm2 = [&](double x, double* slope) {
    double f = 0.0, df = 0.0;
    for (std::size_t p = 0; p < w.size(); ++p) {
      if (w[p] == 0.0) continue;
      const double e = d[p] == 0.0 ? w[p] : w[p] * std::exp(-2.0 * x * d[p]);
      f += e;
      df -= 2.0 * d[p] * e;
    }
    if (slope) *slope = df;
    return f;
  };
  if (norm2(std::numeric_limits<double>::infinity(), nullptr) >= r) {
    return std::numeric_limits<double>::infinity();
  }
  if (norm2(0.0, nullptr) <= r) return 0.0;
  double lo = 0.0;
  double hi = 1.0 / *std::max_element(d.begin(), d.end());
  while (norm2(hi, nullptr) > r) {
    lo = hi;
    hi *= 2.0;
  }
  // Safeguarded Newton on the convex decreasing norm.
  double x = lo;
  for (int it = 0; it < 200; ++it) {
    double slope = 0.0;
    const double f = norm2(x, &slope);
    if (std::abs(f - r) <= rel_tol * r) return x;
    if (f > r) {
      lo = x;
    } else {
      hi = x;
    }
    double next = slope < 0.0 ? x - (f - r) / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * hi) return hi;
    x = next;
  }
  return x;
}

void propagate(const DickeVector& psi_ref, const Ladder& lad, double da, double db, DickeVector& out) {
  out.resize(psi_ref.size());
  for (Eigen::Index p = 0; p < psi_ref.size(); ++p) {
    const auto up = static_cast<std::size_t>(p);
    out[p] = psi_ref[p] * std::polar(std::exp(-db * lad.d[up]), da * lad.twist_coef[up]);
  }
}

}  // namespace

TrajectoryRecord run_trajectory(const DickeVector& psi0, const Drive& drive, double t0,
                                const TrajectoryConfig& config, std::size_t index) {
  const int n = n_atoms(drive);
  if (psi0.size() != dicke_dim(n)) throw DimensionError("run_trajectory: state dimension mismatch");
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-10) {
    throw ConfigError("run_trajectory: initial state must be normalized");
  }
  if (!std::is_sorted(config.sample_times.begin(), config.sample_times.end()) ||
      (!config.sample_times.empty() && config.sample_times.front() < t0)) {
    throw ConfigError("run_trajectory: sample times must be sorted and not before t0");
  }
  if (!(config.jump_tolerance > 0.0)) throw ConfigError("run_trajectory: jump_tolerance must be positive");

  TrajectoryRecord rec;
  rec.index = index;
  if (config.sample_times.empty()) return rec;
  const double t_end = config.sample_times.back();
  const RateIntegrals integrals(drive, t0, t_end, config.dt_max);
  const Ladder lad = ladder_of(n);
  Philox4x32 rng(config.master_seed, index);

  DickeVector psi_ref = psi0;
  double t_ref = t0;
  double a_ref = 0.0;
  double b_ref = 0.0;
  DickeVector psi;
  std::vector<double> weights(static_cast<std::size_t>(psi0.size()));
  std::size_t next = 0;

  auto record = [&](double t, const DickeVector& unnormalized) {
    const DickeVector v = unnormalized / unnormalized.norm();
    const MomentEvaluator eval(v);
    const FirstMoments f = eval.first();
    rec.times.push_back(t);
    rec.first.push_back({f[0].real(), f[1].real(), f[2].real()});
    if (config.record_second_moments) {
      const SecondMoments s = eval.second();
      rec.second.push_back({s[0][0].real(), s[0][1].real(), s[0][2].real(), s[1][1].real(),
                            s[1][2].real(), s[2][2].real()});
    }
    if (config.record_states) rec.states.push_back(v);
  };

  for (;;) {
    const double r = rng.uniform_open_closed();
    if (r < kNormFloor) {
      throw NumericalError("trajectory " + std::to_string(index) +
                           ": jump threshold below the norm floor");
    }
    for (Eigen::Index p = 0; p < psi_ref.size(); ++p) weights[static_cast<std::size_t>(p)] = std::norm(psi_ref[p]);
    const double dx = decay_to_threshold(weights, lad.d, r, config.jump_tolerance);
    const double t_jump = std::isfinite(dx) ? integrals.time_at_decay(b_ref + dx, t_ref)
                                            : std::numeric_limits<double>::infinity();

    while (next < config.sample_times.size() && config.sample_times[next] <= t_jump) {
      const double t = config.sample_times[next++];
      propagate(psi_ref, lad, integrals.twist(t) - a_ref, integrals.decay(t) - b_ref, psi);
      record(t, psi);
    }
    if (next >= config.sample_times.size()) break;

    const double a_jump = integrals.twist(t_jump);
    const double b_jump = std::isfinite(dx) && std::holds_alternative<ModelParams>(drive)
                              ? b_ref + dx
                              : integrals.decay(t_jump);
    propagate(psi_ref, lad, a_jump - a_ref, b_jump - b_ref, psi);
    DickeVector lowered = DickeVector::Zero(psi.size());
    for (int p = 0; p < n; ++p) lowered[p + 1] = lad.s[static_cast<std::size_t>(p)] * psi[p];
    const double norm = lowered.norm();
    if (!(norm > 0.0)) {
      throw NumericalError("trajectory " + std::to_string(index) + ": jump from a dark state");
    }
    psi_ref = lowered / norm;
    t_ref = t_jump;
    a_ref = a_jump;
    b_ref = b_jump;
    rec.jump_times.push_back(t_jump);
  }
  return rec;
}

EnsembleResult ensemble_average(const DickeVector& psi0, const Drive& drive, double t0,
                                const TrajectoryConfig& config, unsigned threads) {
  if (config.n_trajectories < 1) throw ConfigError("ensemble_average: need at least one trajectory");
  std::vector<TrajectoryRecord> records(config.n_trajectories);
  parallel_for(config.n_trajectories, threads, [&](std::size_t i) {
    try {
      records[i] = run_trajectory(psi0, drive, t0, config, i);
    } catch (const Error& e) {
      throw NumericalError("trajectory " + std::to_string(i) + " failed: " + e.what());
    }
  });

  const std::size_t n_samples = config.sample_times.size();
  const double m = static_cast<double>(config.n_trajectories);
  EnsembleResult out;
  out.times = config.sample_times;
  out.mean.assign(n_samples, {});
  out.standard_error.assign(n_samples, {});
  if (config.record_second_moments) {
    out.second_mean.assign(n_samples, {});
    out.second_standard_error.assign(n_samples, {});
  }
  if (config.record_states) {
    const int dim = dicke_dim(n_atoms(drive));
    out.density.assign(n_samples, DensityMatrix::Zero(dim, dim));
  }

  auto reduce = [&](auto member, auto& mean, auto& se) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      auto& mu = mean[s];
      auto& err = se[s];
      for (std::size_t c = 0; c < mu.size(); ++c) {
        double sum = 0.0;
        for (const auto& rec : records) sum += (rec.*member)[s][c];
        const double avg = sum / m;
        double ss = 0.0;
        for (const auto& rec : records) {
          const double dv = (rec.*member)[s][c] - avg;
          ss += dv * dv;
        }
        mu[c] = avg;
        err[c] = config.n_trajectories > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
      }
    }
  };
  reduce(&TrajectoryRecord::first, out.mean, out.standard_error);
  if (config.record_second_moments) {
    reduce(&TrajectoryRecord::second, out.second_mean, out.second_standard_error);
  }
  if (config.record_states) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      for (const auto& rec : records) out.density[s] += rec.states[s] * rec.states[s].adjoint();
      out.density[s] /= m;
    }
  }
  for (const auto& rec : records) out.jump_counts.push_back(rec.jump_times.size());
  if (config.keep_records) out.records = std::move(records);
  return out;
}

}  // namespace srpulse
