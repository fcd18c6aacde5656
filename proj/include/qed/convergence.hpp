#pragma once

#include <cstdint>
#include <vector>

#include "qed/arrivals.hpp"
#include "qed/errors.hpp"
#include "qed/finite_sim.hpp"
#include "qed/limit_chain.hpp"
#include "qed/scaling.hpp"
#include "qed/service.hpp"
#include "qed/stats.hpp"

namespace qed {

struct ConvergenceRow {
  int n = 0;
  double ks = 0.0;  // distance between Q_hat^n and the limiting Q_hat
  double se = 0.0;
  long samples = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  long limit_samples = 0;
  bool non_increasing_within_slack = true;  // each step down to 2(se_i + se_{i+1})
};

/// Samples the scaled stationary queue at each n and compares against the
/// limiting chain with a two-sample KS distance per n.
inline ConvergenceTable convergence_study(const ServiceDistribution& dist, double beta,
                                          ArrivalFamily family, const std::vector<int>& ns,
                                          long per_n_samples, std::uint64_t seed,
                                          long limit_warmup = 100000) {
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) fail(errc::config_error, "n list must be increasing");

  const Trajectory limit =
      run_limit_chain(dist, beta, family.ca(), limit_warmup, per_n_samples, seed ^ 0x11ce5ull);

  ConvergenceTable table;
  table.limit_samples = long(limit.q.size());

  std::uint64_t stream = 0;
  for (int n : ns) {
    const QedScaling sc = qed_scaling(n, beta, dist);
    ArrivalSource src(family, sc.lambda_n, seed + 101u * ++stream);
    auto rng = make_stream(seed, 7000u + stream);
    std::vector<double> q_hat;
    q_hat.reserve(static_cast<std::size_t>(per_n_samples));
    run_embedded(sc, dist, src, default_warmup_slots(sc, dist), per_n_samples, rng,
                 [&](const FiniteSystemState&, const SlotOutcome&, const ScaledView& view) {
                   q_hat.push_back(view.q_hat);
                 });
    ConvergenceRow row;
    row.n = n;
    row.samples = long(q_hat.size());
    row.ks = ks_distance(q_hat, limit.q);
    row.se = ks_standard_error(q_hat.size(), limit.q.size());
    table.rows.push_back(row);
  }

  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& prev = table.rows[i - 1];
    const auto& curr = table.rows[i];
    if (curr.ks > prev.ks + 2.0 * (prev.se + curr.se))
      table.non_increasing_within_slack = false;
  }
  return table;
}

}  // namespace qed
