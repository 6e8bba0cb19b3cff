#include "srpulse/cumulant.hpp"

#include "srpulse/integrator.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace srpulse {

namespace {

constexpr std::array<std::array<int, 2>, 6> kPairs = {
    {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

// Operator whose expectation is the i-th stored quantity.
SpinPolynomial stored_operator(int i) {
  if (i < 3) return SpinPolynomial::generator(static_cast<Axis>(i));
  const auto [j, k] = kPairs[static_cast<std::size_t>(i - 3)];
  const Axis a = static_cast<Axis>(j);
  const Axis b = static_cast<Axis>(k);
  return 0.5 * (SpinPolynomial::word({a, b}) + SpinPolynomial::word({b, a}));
}

struct Term {
  SpinWord word;
  cplx coef;
};

struct ExpandedGenerator {
  // Raw commutator expansion, [stored][rate] with rate 0 = twist, 1 = decay.
  std::array<std::array<SpinPolynomial, 2>, 9> raw;
  // The same after normal ordering, flattened for fast evaluation.
  std::array<std::array<std::vector<Term>, 2>, 9> sorted;
};

const ExpandedGenerator& expanded_generator() {
  static const ExpandedGenerator table = [] {
    ExpandedGenerator t;
    for (int i = 0; i < 9; ++i) {
      const GeneratorTerms g = heisenberg_generator(stored_operator(i));
      t.raw[i][0] = g.twist;
      t.raw[i][1] = g.decay;
      for (int r = 0; r < 2; ++r) {
        const SpinPolynomial ordered = t.raw[i][r].normal_ordered().pruned();
        for (const auto& [w, c] : ordered.terms()) {
          t.sorted[i][r].push_back({w, c});
        }
      }
    }
    return t;
  }();
  return table;
}

// Evaluate a sorted word (degree 1..3) from the state with the closure.
cplx closed_moment(const MomentState& s, const SecondMoments& second, const SpinWord& w) {
  switch (w.size()) {
    case 0:
      return 1.0;
    case 1:
      return s.first[index_of(w[0])];
    case 2:
      return second[index_of(w[0])][index_of(w[1])];
    case 3: {
      const int j = index_of(w[0]), k = index_of(w[1]), l = index_of(w[2]);
      const double a = s.first[j], b = s.first[k], c = s.first[l];
      return a * second[k][l] + b * second[j][l] + c * second[j][k] - 2.0 * a * b * c;
    }
    default:
      throw std::logic_error("closed_moment: unexpected word length " + std::to_string(w.size()));
  }
}

}  // namespace

int MomentState::pair_index(int j, int k) {
  if (j > k) std::swap(j, k);
  for (int i = 0; i < 6; ++i) {
    if (kPairs[static_cast<std::size_t>(i)][0] == j && kPairs[static_cast<std::size_t>(i)][1] == k) {
      return i;
    }
  }
  throw std::out_of_range("MomentState::pair_index");
}

cplx MomentState::ordered(int j, int k) const {
  cplx v = symmetric(j, k);
  if (j != k) {
    const int l = 3 - j - k;
    v += cplx(0.0, 0.5 * levi_civita(j, k, l) * first[l]);
  }
  return v;
}

SecondMoments MomentState::ordered_second() const {
  SecondMoments m{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) m[j][k] = ordered(j, k);
  }
  return m;
}

namespace {

template <class State>
MomentState moments_of(const State& state) {
  const MomentEvaluator eval(state);
  const FirstMoments f = eval.first();
  const SecondMoments s = eval.second();
  MomentState m;
  for (int j = 0; j < 3; ++j) m.first[j] = f[j].real();
  for (int i = 0; i < 6; ++i) {
    const auto [j, k] = kPairs[static_cast<std::size_t>(i)];
    m.second[static_cast<std::size_t>(i)] = s[j][k].real();
  }
  return m;
}

}  // namespace

MomentState MomentState::from_state(const DensityMatrix& rho) { return moments_of(rho); }
MomentState MomentState::from_state(const DickeVector& psi) { return moments_of(psi); }

Eigen::VectorXd MomentState::to_vector() const {
  Eigen::VectorXd v(kSize);
  for (int i = 0; i < 3; ++i) v[i] = first[i];
  for (int i = 0; i < 6; ++i) v[3 + i] = second[i];
  return v;
}

MomentState MomentState::from_vector(const Eigen::VectorXd& v) {
  MomentState m;
  for (int i = 0; i < 3; ++i) m.first[i] = v[i];
  for (int i = 0; i < 6; ++i) m.second[i] = v[3 + i];
  return m;
}

ThirdMoments closure3(const MomentState& state) {
  const SecondMoments s = state.ordered_second();
  const auto& f = state.first;
  ThirdMoments out{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      for (int l = 0; l < 3; ++l) {
        out[third_index(j, k, l)] =
            f[j] * s[k][l] + f[k] * s[j][l] + f[l] * s[j][k] - 2.0 * f[j] * f[k] * f[l];
      }
    }
  }
  return out;
}

MomentState moment_rhs(const MomentState& state, const ModelParams& params) {
  const auto& table = expanded_generator();
  const SecondMoments second = state.ordered_second();
  const double rates[2] = {params.twist_rate(), params.decay_rate()};
  Eigen::VectorXd d(MomentState::kSize);
  for (int i = 0; i < MomentState::kSize; ++i) {
    cplx acc = 0.0;
    for (int r = 0; r < 2; ++r) {
      if (rates[r] == 0.0) continue;
      cplx part = 0.0;
      for (const Term& t : table.sorted[i][r]) part += t.coef * closed_moment(state, second, t.word);
      acc += rates[r] * part;
    }
    d[i] = acc.real();
  }
  return MomentState::from_vector(d);
}

std::array<cplx, 9> moment_rhs_unclosed(const MomentOracle& oracle, const ModelParams& params) {
  const auto& table = expanded_generator();
  std::array<cplx, 9> out{};
  for (int i = 0; i < 9; ++i) {
    out[i] = params.twist_rate() * table.raw[i][0].evaluate(oracle) +
             params.decay_rate() * table.raw[i][1].evaluate(oracle);
  }
  return out;
}

MomentOracle factorized_oracle(const std::array<double, 3>& first) {
  return [first](std::span<const Axis> word) {
    cplx v = 1.0;
    for (Axis a : word) v *= first[index_of(a)];
    return v;
  };
}

SecondMoments CumulantTrajectory::connected(std::size_t i) const {
  SecondMoments c{};
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) c[j][k] = states[i].connected(j, k);
  }
  return c;
}

CumulantTrajectory integrate_cumulant2(const MomentState& initial, const Drive& drive, double t0,
                                       std::span<const double> sample_times,
                                       const Cumulant2Options& options) {
  if (!(options.tol > 0.0 && options.tol <= 1e-2)) {
    throw ConfigError("integrate_cumulant2: tol must lie in (0, 1e-2]");
  }
  const double scale = 0.5 * n_atoms(drive);
  StepControl control;
  control.rtol = options.tol;
  control.atol = options.tol * scale;

  CumulantTrajectory out;
  out.times.reserve(sample_times.size());
  out.states.reserve(sample_times.size());
  const std::vector<double> breaks = breakpoints(drive);

  if (options.force_factorization) {
    auto rhs = [&drive](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
      const ModelParams p = params_at(drive, t);
      const std::array<cplx, 9> d = moment_rhs_unclosed(factorized_oracle({y[0], y[1], y[2]}), p);
      dy.resize(3);
      for (int i = 0; i < 3; ++i) dy[i] = d[i].real();
    };
    Eigen::VectorXd y0(3);
    for (int i = 0; i < 3; ++i) y0[i] = initial.first[i];
    integrate_samples<Eigen::VectorXd>(
        rhs, t0, y0, sample_times, breaks, control, [&out](double t, const Eigen::VectorXd& y) {
          MomentState m;
          for (int i = 0; i < 3; ++i) m.first[i] = y[i];
          for (int i = 0; i < 6; ++i) {
            const auto [j, k] = kPairs[static_cast<std::size_t>(i)];
            m.second[i] = y[j] * y[k];
          }
          out.times.push_back(t);
          out.states.push_back(m);
        });
    return out;
  }

  auto rhs = [&drive](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy = moment_rhs(MomentState::from_vector(y), params_at(drive, t)).to_vector();
  };
  integrate_samples<Eigen::VectorXd>(rhs, t0, initial.to_vector(), sample_times, breaks, control,
                                     [&out](double t, const Eigen::VectorXd& y) {
                                       out.times.push_back(t);
                                       out.states.push_back(MomentState::from_vector(y));
                                     });
  return out;
}

CumulantTrajectory integrate_cumulant2(const DickeVector& initial, const Drive& drive, double t0,
                                       std::span<const double> sample_times,
                                       const Cumulant2Options& options) {
  if (initial.size() != dicke_dim(n_atoms(drive))) {
    throw DimensionError("integrate_cumulant2: state dimension does not match N + 1");
  }
  return integrate_cumulant2(MomentState::from_state(initial), drive, t0, sample_times, options);
}

cplx cumulant_from_moments(const MomentOracle& oracle, std::span<const Axis> ops) {
  const int n = static_cast<int>(ops.size());
  if (n < 1 || n > 4) {
    throw std::invalid_argument("cumulant_from_moments: order must be between 1 and 4, got " +
                                std::to_string(n));
  }
  static constexpr double kFactorial[5] = {1, 1, 2, 6, 24};
  // Enumerate set partitions as restricted growth strings.
  std::array<int, 4> block{};
  std::array<int, 4> running_max{};
  cplx total = 0.0;
  for (;;) {
    const int n_blocks = 1 + *std::max_element(block.begin(), block.begin() + n);
    cplx product = 1.0;
    for (int b = 0; b < n_blocks; ++b) {
      SpinWord w;
      for (int i = 0; i < n; ++i) {
        if (block[static_cast<std::size_t>(i)] == b) w.push_back(ops[static_cast<std::size_t>(i)]);
      }
      product *= oracle(w);
    }
    const double sign = (n_blocks - 1) % 2 == 0 ? 1.0 : -1.0;
    total += sign * kFactorial[n_blocks - 1] * product;

    // Next restricted growth string: block[0] = 0, block[i] <= 1 + max(block[0..i-1]).
    int i = n - 1;
    while (i > 0 && block[static_cast<std::size_t>(i)] > running_max[static_cast<std::size_t>(i - 1)]) {
      --i;
    }
    if (i == 0) break;
    ++block[static_cast<std::size_t>(i)];
    running_max[static_cast<std::size_t>(i)] =
        std::max(running_max[static_cast<std::size_t>(i - 1)], block[static_cast<std::size_t>(i)]);
    for (int r = i + 1; r < n; ++r) {
      block[static_cast<std::size_t>(r)] = 0;
      running_max[static_cast<std::size_t>(r)] = running_max[static_cast<std::size_t>(i)];
    }
  }
  return total;
}

}  // namespace srpulse
