#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qed/arrivals.hpp"
#include "qed/errors.hpp"
#include "qed/finite_sim.hpp"
#include "qed/limit_chain.hpp"
#include "qed/scaling.hpp"
#include "qed/service.hpp"
#include "qed/stats.hpp"

namespace qed {

/// Maintains the K-deep windows (Ybar_t, Zbar_t) behind the Lyapunov
/// functionals for any chain that reports per-step (y_hat, z_hat). Exposes
/// s_t = tail_p . Ybar_t + alpha . Zbar_t, whose exponential and powers are
/// the geometric and polynomial Lyapunov functions, and the indicator of the
/// exception set (some window component below x).
class LyapunovTracker {
 public:
  LyapunovTracker(const ServiceDistribution& dist, double boundary)
      : tail_(dist.tail()), boundary_(boundary), K_(dist.max_service()) {
    y_.assign(static_cast<std::size_t>(K_) + 1, 0.0);
    z_.assign(static_cast<std::size_t>(K_) * static_cast<std::size_t>(K_), 0.0);
  }

  void push(double y_hat, const std::vector<double>& z_hat) {
    ++t_;
    y_[static_cast<std::size_t>(t_ % long(y_.size()))] = y_hat;
    double* row = z_.data() + static_cast<std::size_t>(t_ % long(K_)) * static_cast<std::size_t>(K_);
    for (int i = 0; i < K_; ++i) row[static_cast<std::size_t>(i)] = z_hat[static_cast<std::size_t>(i)];
    s_prev_ = s_curr_;
    prev_outside_ = curr_outside_;
    if (t_ >= K_) {  // full window; earlier values are discarded by ready()
      s_curr_ = compute_s();
      curr_outside_ = compute_outside();
    }
    ++pushes_;
  }

  bool ready() const { return pushes_ > 2 * K_ + 1; }
  double s_current() const { return s_curr_; }
  double s_previous() const { return s_prev_; }
  bool previous_outside() const { return prev_outside_; }

 private:
  double y_at(long time) const { return y_[static_cast<std::size_t>(time % long(y_.size()))]; }
  const double* z_at(long time) const {
    return z_.data() + static_cast<std::size_t>(time % long(K_)) * static_cast<std::size_t>(K_);
  }

  double compute_s() const {
    double s = 0.0;
    for (int i = 0; i < K_; ++i) s += tail_[static_cast<std::size_t>(i)] * y_at(t_ - i);
    for (int k = 1; k <= K_; ++k) {
      const double* z = z_at(t_ + 1 - k);
      for (int j = k + 1; j <= K_; ++j) s += double(j - k) * z[j - 1];
    }
    return s;
  }

  bool compute_outside() const {
    for (int i = 0; i < K_; ++i)
      if (y_at(t_ - i) < boundary_) return false;
    return true;
  }

  std::vector<double> tail_;
  double boundary_;
  int K_;
  long t_ = 0;
  long pushes_ = 0;
  std::vector<double> y_;
  std::vector<double> z_;
  double s_curr_ = 0.0, s_prev_ = 0.0;
  bool curr_outside_ = false, prev_outside_ = false;
};

/// Value of the polynomial functional (tail_p . y + alpha . z)^theta given the
/// already-reduced linear part.
inline double psi_value(double linear_part, double theta) { return std::pow(linear_part, theta); }

enum class DriftMode { geometric, quadratic };

struct DriftReport {
  DriftMode mode = DriftMode::geometric;
  double theta = 0.0;
  // geometric mode: mean one-step ratios of exp(theta s)
  double ratio_outside = 0.0;
  double ratio_outside_se = 0.0;
  double growth_ratio_all = 0.0;
  double growth_ratio_all_se = 0.0;
  // quadratic mode: regression of the s^2 increment on -s outside the
  // exception set
  double delta = 0.0;
  double delta_se = 0.0;
  double psi_intercept = 0.0;
  double exception_frequency = 0.0;
  long steps = 0;
  long steps_outside = 0;
};

namespace detail {

struct RatioAccumulator {
  double sum = 0.0, sum2 = 0.0;
  long n = 0;
  void add(double r) {
    sum += r;
    sum2 += r * r;
    ++n;
  }
  double mean() const { return n > 0 ? sum / double(n) : 0.0; }
  double se() const {
    if (n < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum2 / double(n) - m * m) / double(n));
  }
};

}  // namespace detail

/// Empirical geometric-drift check along a limiting-chain trajectory: the
/// one-step ratio of exp(theta s) averaged over visited states, split by the
/// exception-set indicator of the previous window. Ratios are evaluated
/// through log differences; a step that would overflow is reported, not
/// clamped.
inline DriftReport drift_check_geometric(const ServiceDistribution& dist, double beta, double ca,
                                         double theta, long steps, std::uint64_t seed,
                                         long warmup = 20000) {
  if (!(theta > 0.0)) fail(errc::degenerate_noise, "theta must be positive");
  GaussianDrivers drivers(dist, ca, seed);
  LimitChainState state = initial_limit_state(dist);
  LyapunovTracker tracker(dist, beta);
  std::vector<double> scratch;
  std::vector<double> z(static_cast<std::size_t>(dist.max_service()));

  DriftReport report;
  report.mode = DriftMode::geometric;
  report.theta = theta;
  detail::RatioAccumulator outside, all;
  long inside_count = 0;

  const long total = warmup + steps;
  for (long t = 0; t < total; ++t) {
    limit_step(state, beta, dist, drivers, scratch);
    const double* zr = state.z_row(state.t);
    z.assign(zr, zr + dist.max_service());
    tracker.push(state.y_hat(), z);
    if (t < warmup || !tracker.ready()) continue;
    const double log_ratio = theta * (tracker.s_current() - tracker.s_previous());
    if (log_ratio > 700.0)
      fail(errc::overflow, "Phi ratio overflow at step " + std::to_string(t) +
                               " with s=" + std::to_string(tracker.s_current()));
    const double ratio = std::exp(log_ratio);
    all.add(ratio);
    if (tracker.previous_outside())
      outside.add(ratio);
    else
      ++inside_count;
  }

  report.steps = all.n;
  report.steps_outside = outside.n;
  report.ratio_outside = outside.mean();
  report.ratio_outside_se = outside.se();
  report.growth_ratio_all = all.mean();
  report.growth_ratio_all_se = all.se();
  report.exception_frequency = all.n > 0 ? double(inside_count) / double(all.n) : 0.0;
  return report;
}

/// Empirical quadratic-drift check along the scaled finite-n chain at
/// theta = 2: regresses the one-step increment of s^2 on s over states whose
/// previous window sits outside the exception set. A positive fitted delta
/// (negative regression slope) is the drift certificate.
inline DriftReport drift_check_quadratic(const QedScaling& sc, const ServiceDistribution& dist,
                                         ArrivalFamily family, long steps, std::uint64_t seed,
                                         long warmup = -1) {
  if (warmup < 0) warmup = default_warmup_slots(sc, dist);
  ArrivalSource src(family, sc.lambda_n, seed);
  auto rng = make_stream(seed, 0xd21f7u);
  LyapunovTracker tracker(dist, sc.beta_n);

  std::vector<double> xs, ys;
  xs.reserve(static_cast<std::size_t>(steps));
  ys.reserve(static_cast<std::size_t>(steps));
  long inside_count = 0, total_count = 0;

  run_embedded(sc, dist, src, warmup, steps, rng,
               [&](const FiniteSystemState&, const SlotOutcome&, const ScaledView& view) {
                 tracker.push(view.y_hat, view.z_hat);
                 if (!tracker.ready()) return;
                 ++total_count;
                 if (!tracker.previous_outside()) {
                   ++inside_count;
                   return;
                 }
                 const double s0 = tracker.s_previous();
                 const double s1 = tracker.s_current();
                 xs.push_back(s0);
                 ys.push_back(s1 * s1 - s0 * s0);
               });

  if (xs.size() < 100) fail(errc::too_few_samples, "too few steps outside the exception set");

  DriftReport report;
  report.mode = DriftMode::quadratic;
  report.theta = 2.0;
  const LineFit fit = fit_line(xs, ys);
  report.delta = -fit.slope;
  report.delta_se = fit.slope_se;
  report.psi_intercept = fit.intercept;
  report.steps = total_count;
  report.steps_outside = long(xs.size());
  report.exception_frequency =
      total_count > 0 ? double(inside_count) / double(total_count) : 0.0;
  return report;
}

}  // namespace qed
