#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qed/arrivals.hpp"
#include "qed/errors.hpp"
#include "qed/event_sim.hpp"
#include "qed/scaling.hpp"
#include "qed/service.hpp"
#include "qed/stats.hpp"

namespace qed {

struct WaitingReport {
  double ks_wait = 0.0;    // KS( sqrt(n) W , Q_hat_limit / mu )
  double ks_wait_se = 0.0;
  double ks_little = 0.0;  // KS( Q , A(0, W] ) via independent stationary replay
  double ks_little_se = 0.0;
  long records = 0;
};

/// Stationary waiting-time checks: (a) the scaled waits against the limiting
/// queue divided by mu, and (b) the distributional identity between the
/// queue length and the arrival count over an independent stationary window
/// of length W, one replay per customer record.
inline WaitingReport waiting_time_checks(const std::vector<CustomerRecord>& records,
                                         const std::vector<double>& q_hat_limit,
                                         const std::vector<double>& q_finite,
                                         const QedScaling& sc, const ServiceDistribution& dist,
                                         ArrivalFamily family, std::uint64_t seed,
                                         long min_records = 100000) {
  if (long(records.size()) < min_records)
    fail(errc::too_few_samples, "need at least " + std::to_string(min_records) + " records");
  if (q_hat_limit.empty() || q_finite.empty())
    fail(errc::too_few_samples, "empty comparison sample");

  WaitingReport report;
  report.records = long(records.size());

  std::vector<double> scaled_waits;
  scaled_waits.reserve(records.size());
  const double root = sc.sqrt_n();
  for (const auto& r : records) scaled_waits.push_back(root * r.wait);

  std::vector<double> scaled_limit;
  scaled_limit.reserve(q_hat_limit.size());
  const double mu = dist.mu();
  for (double q : q_hat_limit) scaled_limit.push_back(q / mu);

  report.ks_wait = ks_distance(scaled_waits, scaled_limit);
  report.ks_wait_se = ks_standard_error(scaled_waits.size(), scaled_limit.size());

  std::vector<double> replay_counts;
  replay_counts.reserve(records.size());
  std::uint64_t stream = 0;
  for (const auto& r : records) {
    const long c = r.wait > 0.0
                       ? stationary_window_count(family, sc.lambda_n, r.wait, seed + 17u * ++stream)
                       : 0;
    replay_counts.push_back(double(c));
  }
  report.ks_little = ks_distance(q_finite, replay_counts);
  report.ks_little_se = ks_standard_error(q_finite.size(), replay_counts.size());
  return report;
}

}  // namespace qed
