#pragma once

#include "srpulse/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace srpulse {

struct StepControl {
  double rtol = 1e-8;
  double atol = 1e-8;
  double initial_step = 0.0;  // 0 selects a step from the local derivative scale
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
};

/// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with PI step-size
/// control and the fourth-order continuous extension, for Eigen vectors of
/// real or complex scalars.
///
/// Usage: reset(t0, y0), then step(t_limit) repeatedly; after each accepted
/// step dense(t, out) interpolates anywhere in [t_previous(), t()].
template <class Vector>
class DormandPrince45 {
 public:
  using Rhs = std::function<void(double, const Vector&, Vector&)>;

  DormandPrince45(Rhs rhs, StepControl control) : rhs_(std::move(rhs)), control_(control) {}

  void reset(double t, const Vector& y) {
    t_ = t;
    t_prev_ = t;
    y_ = y;
    k1_.resize(y.size());
    call(t_, y_, k1_);
    h_ = control_.initial_step > 0.0 ? control_.initial_step : initial_step();
    facold_ = 1e-4;
    last_rejected_ = false;
    has_dense_ = false;
  }

  double t() const { return t_; }
  double t_previous() const { return t_prev_; }
  const Vector& y() const { return y_; }
  double step_size() const { return h_; }
  const IntegratorStats& stats() const { return stats_; }

  /// Take one accepted step that does not pass t_limit.
  void step(double t_limit) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    constexpr double facc1 = 1.0 / 0.2, facc2 = 1.0 / 10.0;

    if (!(t_limit > t_)) throw IntegrationError("DormandPrince45::step: t_limit must exceed t");
    const std::size_t n = static_cast<std::size_t>(y_.size());
    for (auto* v : {&k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_}) v->resize(y_.size());

    for (;;) {
      if (stats_.accepted + stats_.rejected >= control_.max_steps) {
        throw IntegrationError("step budget of " + std::to_string(control_.max_steps) +
                               " exhausted at t = " + std::to_string(t_));
      }
      const double proposal = std::min(h_, control_.max_step);
      double h = std::min(proposal, t_limit - t_);
      bool lands_on_limit = (t_ + h >= t_limit) || (t_limit - (t_ + h) < 1e-12 * std::abs(h));
      if (lands_on_limit) h = t_limit - t_;
      if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_))) {
        throw IntegrationError("step size underflow at t = " + std::to_string(t_));
      }

      ytmp_ = y_ + h * (a21 * k1_);
      call(t_ + c2 * h, ytmp_, k2_);
      ytmp_ = y_ + h * (a31 * k1_ + a32 * k2_);
      call(t_ + c3 * h, ytmp_, k3_);
      ytmp_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
      call(t_ + c4 * h, ytmp_, k4_);
      ytmp_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
      call(t_ + c5 * h, ytmp_, k5_);
      ytmp_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
      const double t_new = lands_on_limit ? t_limit : t_ + h;
      call(t_new, ytmp_, k6_);
      ynew_ = y_ + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
      call(t_new, ynew_, k7_);

      // Error estimate, RMS norm weighted by atol + rtol * max(|y|, |y_new|).
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        const auto e = h * (e1 * k1_[idx] + e3 * k3_[idx] + e4 * k4_[idx] + e5 * k5_[idx] +
                            e6 * k6_[idx] + e7 * k7_[idx]);
        const double sk = control_.atol +
                          control_.rtol * std::max(std::abs(y_[idx]), std::abs(ynew_[idx]));
        const double r = std::abs(e) / sk;
        err += r * r;
      }
      err = n > 0 ? std::sqrt(err / static_cast<double>(n)) : 0.0;
      if (!std::isfinite(err)) {
        ++stats_.rejected;
        h_ = 0.1 * h;
        last_rejected_ = true;
        continue;
      }

      const double fac11 = std::pow(err, expo1);
      double fac = fac11 / std::pow(facold_, beta);
      fac = std::max(facc2, std::min(facc1, fac / safe));
      double h_new = h / fac;

      if (err <= 1.0) {
        ++stats_.accepted;
        facold_ = std::max(err, 1e-4);
        if (last_rejected_) h_new = std::min(h_new, h);
        last_rejected_ = false;

        // Dense output coefficients for [t, t_new].
        r1_ = y_;
        r2_ = ynew_ - y_;
        r3_ = h * k1_ - r2_;
        r4_ = r2_ - h * k7_ - r3_;
        r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
        dense_h_ = h;
        has_dense_ = true;

        t_prev_ = t_;
        t_ = t_new;
        y_.swap(ynew_);
        k1_.swap(k7_);
        // A step clipped by t_limit says little about the attainable size.
        h_ = (h < proposal) ? std::max(h_new, proposal) : h_new;
        return;
      }
      ++stats_.rejected;
      h_ = h / std::min(facc1, fac11 / safe);
      last_rejected_ = true;
    }
  }

  /// Continuous extension on the last accepted step.
  void dense(double t, Vector& out) const {
    if (!has_dense_) {
      out = y_;
      return;
    }
    const double theta = (t - t_prev_) / dense_h_;
    const double theta1 = 1.0 - theta;
    out = r1_ + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_)));
  }

 private:
  void call(double t, const Vector& y, Vector& dydt) {
    ++stats_.rhs_evaluations;
    rhs_(t, y, dydt);
  }

  // Initial step heuristic after Hairer, Norsett and Wanner.
  double initial_step() {
    const std::size_t n = static_cast<std::size_t>(y_.size());
    if (n == 0) return 1.0;
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      const double sk = control_.atol + control_.rtol * std::abs(y_[idx]);
      dnf += std::pow(std::abs(k1_[idx]) / sk, 2);
      dny += std::pow(std::abs(y_[idx]) / sk, 2);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, control_.max_step);
    Vector y1 = y_ + h * k1_;
    Vector f1(y_.size());
    call(t_ + h, y1, f1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<Eigen::Index>(i);
      const double sk = control_.atol + control_.rtol * std::abs(y_[idx]);
      der2 += std::pow(std::abs(f1[idx] - k1_[idx]) / sk, 2);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * std::abs(h), h1, control_.max_step});
  }

  Rhs rhs_;
  StepControl control_;
  IntegratorStats stats_;
  double t_ = 0.0;
  double t_prev_ = 0.0;
  double h_ = 0.0;
  double facold_ = 1e-4;
  bool last_rejected_ = false;
  bool has_dense_ = false;
  double dense_h_ = 0.0;
  Vector y_, k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_;
  Vector r1_, r2_, r3_, r4_, r5_;
};

/// Integrate from (t0, y0) through every sample time, restarting the stepper
/// at each breakpoint (where the right-hand side may be non-smooth). The
/// observer is called as observer(t, y) for each sample in order; samples
/// must be sorted and >= t0.
template <class Vector, class Observer>
IntegratorStats integrate_samples(typename DormandPrince45<Vector>::Rhs rhs, double t0,
                                  const Vector& y0, std::span<const double> samples,
                                  std::span<const double> breakpoints, StepControl control,
                                  Observer&& observer) {
  if (samples.empty()) return {};
  if (!std::is_sorted(samples.begin(), samples.end())) {
    throw IntegrationError("integrate_samples: sample times must be sorted");
  }
  if (samples.front() < t0) throw IntegrationError("integrate_samples: sample before t0");

  const double t_end = samples.back();
  std::vector<double> stops;
  for (double b : breakpoints) {
    if (b > t0 && b < t_end) stops.push_back(b);
  }
  std::sort(stops.begin(), stops.end());
  stops.push_back(t_end);

  DormandPrince45<Vector> stepper(std::move(rhs), control);
  stepper.reset(t0, y0);
  std::size_t next = 0;
  Vector buffer(y0.size());
  while (next < samples.size() && samples[next] <= t0) observer(samples[next++], stepper.y());

  for (double stop : stops) {
    if (stop <= stepper.t()) continue;
    while (stepper.t() < stop) {
      stepper.step(stop);
      while (next < samples.size() && samples[next] <= stepper.t()) {
        if (samples[next] == stepper.t()) {
          observer(samples[next], stepper.y());
        } else {
          stepper.dense(samples[next], buffer);
          observer(samples[next], buffer);
        }
        ++next;
      }
    }
    if (stop < t_end) stepper.reset(stop, Vector(stepper.y()));
  }
  return stepper.stats();
}

}  // namespace srpulse
