#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "qed/checkers.hpp"
#include "qed/config.hpp"
#include "qed/convergence.hpp"
#include "qed/derived.hpp"
#include "qed/drift.hpp"
#include "qed/event_sim.hpp"
#include "qed/io.hpp"
#include "qed/version.hpp"

namespace qed {

/// Runs fn(0..count-1) on up to `workers` threads. Work is identified by
/// index, so results are placed deterministically regardless of scheduling.
template <class Fn>
void parallel_replications(int count, int workers, Fn&& fn) {
  if (count <= 1 || workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int threads = std::min(workers, count);
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

inline std::uint64_t replication_seed(std::uint64_t root, int replication, unsigned salt) {
  std::uint64_t s = root ^ (0x5851f42d4c957f2dull * (std::uint64_t(replication) + 1)) ^ salt;
  return splitmix64(s);
}

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;
  json summary;
};

namespace detail {

inline long default_limit_warmup() { return 100000; }

/// Streams scaled stationary queue samples (limit or finite mode) into
/// per-replication accumulators and merges them in replication order.
inline StationaryEstimate sample_queue_estimate(const ExperimentConfig& cfg) {
  const ServiceDistribution dist = cfg.dist();
  const int reps = cfg.replications;
  const long per = (cfg.samples + reps - 1) / reps;
  const int batches_per_rep = std::max(1, cfg.batches / reps);
  const long batch_size = std::max<long>(1, per / batches_per_rep);

  std::vector<SampleAccumulator> accs(static_cast<std::size_t>(reps),
                                      SampleAccumulator(0.0, cfg.hist_max, cfg.bin_width));

  if (cfg.mode == RunMode::limit) {
    const double ca = cfg.ca();
    const long warmup = cfg.warmup > 0 ? cfg.warmup : default_limit_warmup();
    parallel_replications(reps, cfg.workers, [&](int r) {
      auto& acc = accs[static_cast<std::size_t>(r)];
      GaussianDrivers drivers(dist, ca, replication_seed(cfg.seed, r, 0xa11ce));
      LimitChainState state = initial_limit_state(dist);
      std::vector<double> scratch;
      for (long t = 0; t < warmup; ++t) limit_step(state, cfg.beta, dist, drivers, scratch);
      long in_batch = 0;
      int closed = 0;
      for (long t = 0; t < per; ++t) {
        limit_step(state, cfg.beta, dist, drivers, scratch);
        acc.add(state.q_hat);
        if (++in_batch == batch_size && closed + 1 < batches_per_rep) {
          acc.close_batch();
          in_batch = 0;
          ++closed;
        }
      }
      acc.close_batch();
    });
  } else if (cfg.mode == RunMode::finite) {
    const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
    const long warmup = cfg.warmup > 0 ? cfg.warmup : default_warmup_slots(sc, dist);
    parallel_replications(reps, cfg.workers, [&](int r) {
      auto& acc = accs[static_cast<std::size_t>(r)];
      ArrivalSource src(cfg.family, sc.lambda_n, replication_seed(cfg.seed, r, 0xa221e));
      auto rng = make_stream(replication_seed(cfg.seed, r, 0xa331f), 1);
      long in_batch = 0;
      int closed = 0;
      run_embedded(sc, dist, src, warmup, per, rng,
                   [&](const FiniteSystemState&, const SlotOutcome&, const ScaledView& view) {
                     acc.add(view.q_hat);
                     if (++in_batch == batch_size && closed + 1 < batches_per_rep) {
                       acc.close_batch();
                       in_batch = 0;
                       ++closed;
                     }
                   });
      acc.close_batch();
    });
  } else {
    fail(errc::config_error, "estimates need run.mode = limit or finite");
  }

  SampleAccumulator merged = accs[0];
  for (std::size_t r = 1; r < accs.size(); ++r) merged.merge(accs[r]);
  return merged.finalize();
}

inline json resolved_config_json(const ExperimentConfig& cfg) {
  json model{{"service", service_to_json(cfg.dist())["p"]}, {"beta", cfg.beta}};
  json arrivals{{"family", cfg.family.name()}, {"c_a", cfg.ca()}};
  json run{{"mode", run_mode_name(cfg.mode)},
           {"n", cfg.n},
           {"n_list", cfg.n_list},
           {"warmup", cfg.warmup},
           {"samples", cfg.samples},
           {"replications", cfg.replications},
           {"workers", cfg.workers},
           {"seed", cfg.seed}};
  json analysis{{"bin_width", cfg.bin_width},
                {"hist_max", cfg.hist_max},
                {"batches", cfg.batches},
                {"tail_min_bin_count", cfg.tail_min_bin_count},
                {"theta_grid", cfg.theta_grid},
                {"drift_theta_multipliers", cfg.drift_multipliers},
                {"drift_steps", cfg.drift_steps}};
  json output{{"dir", cfg.out_dir},
              {"csv", cfg.write_csv},
              {"json", cfg.write_json}};
  return json{{"model", model},
              {"arrivals", arrivals},
              {"run", run},
              {"analysis", analysis},
              {"output", output}};
}

inline void write_manifest(const ExperimentConfig& cfg, RunResult& result,
                           const std::string& command) {
  json seeds = json::array();
  for (int r = 0; r < cfg.replications; ++r) seeds.push_back(replication_seed(cfg.seed, r, 0xa11ce));
  json manifest{{"tool", "qedsim"},
                {"version", kVersion},
                {"command", command},
                {"config", resolved_config_json(cfg)},
                {"root_seed", cfg.seed},
                {"replication_seeds", seeds},
                {"artifacts", result.artifacts}};
  const std::string path = cfg.out_dir + "/manifest.json";
  write_text_file(path, manifest.dump(2) + "\n");
  result.artifacts.push_back("manifest.json");
}

inline void ensure_out_dir(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) fail(errc::io_error, "cannot create output directory '" + cfg.out_dir + "'");
}

}  // namespace detail

/// `model`: derived constants of the configured law.
inline RunResult run_model(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  const ServiceDistribution dist = cfg.dist();
  RunResult result;

  json j{{"service", service_to_json(dist)["p"]},
         {"K", dist.max_service()},
         {"mean_service", dist.mean_service()},
         {"mu", dist.mu()},
         {"sigma_s", dist.sigma_s()},
         {"c_s", dist.cs()},
         {"tail", dist.tail()},
         {"beta", cfg.beta},
         {"c_a", cfg.ca()}};
  try {
    const DerivedConstants d = derive_constants(dist, cfg.beta, cfg.ca());
    j.update(derived_to_json(d));
  } catch (const Error& e) {
    if (e.code() != errc::degenerate_noise) throw;
    const GammaResult g = gamma_matrix(dist);
    j["theta_star"] = nullptr;
    j["sigma"] = matrix_to_json(covariance_sigma(dist));
    j["alpha"] = alpha_vector(dist.max_service());
    j["gamma"] = matrix_to_json(g.gamma);
    j["psi"] = g.psi;
  }
  result.summary = j;
  if (cfg.write_json) {
    write_text_file(cfg.out_dir + "/model.json", j.dump(2) + "\n");
    result.artifacts.push_back("model.json");
  }
  detail::write_manifest(cfg, result, "model");
  return result;
}

/// `estimate`: stationary histogram/moments of the scaled queue.
inline RunResult run_estimate(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const StationaryEstimate est = detail::sample_queue_estimate(cfg);
  result.summary = estimate_to_json(est);
  if (cfg.write_json) {
    write_text_file(cfg.out_dir + "/estimate.json", result.summary.dump(2) + "\n");
    result.artifacts.push_back("estimate.json");
  }
  if (cfg.write_csv) {
    write_histogram_csv(est, cfg.out_dir + "/histogram.csv");
    result.artifacts.push_back("histogram.csv");
  }
  detail::write_manifest(cfg, result, "estimate");
  return result;
}

/// `exponent`: estimate plus the log-tail slope against the critical
/// exponent 2 beta / (c_a^2 + c_s^2).
inline RunResult run_exponent(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const ServiceDistribution dist = cfg.dist();
  const double theta_ref = theta_star(cfg.beta, cfg.ca(), dist.cs());

  const StationaryEstimate est = detail::sample_queue_estimate(cfg);
  const TailFit fit = fit_tail_exponent_auto(est, theta_ref, cfg.tail_min_bin_count);

  json j = tail_fit_to_json(fit);
  j["estimate"] = estimate_to_json(est);

  if (cfg.mode == RunMode::limit && dist.deterministic() && dist.mean_service() == 1.0) {
    // deterministic unit service: the chain reduces to the reflected Gaussian
    // walk, whose stationary law the fixed-point oracle computes directly
    const double span = std::max(8.0 / theta_ref + 6.0 * cfg.ca(), 4.0 * cfg.ca());
    const auto oracle = reflected_walk_oracle(cfg.beta, cfg.ca(), span, cfg.ca() / 100.0);
    double sup = 0.0;
    long cum = est.below_range;
    for (std::size_t i = 0; i < est.counts.size(); ++i) {
      cum += est.counts[i];
      const double x = est.bin_lo(i) + est.bin_width;
      if (x >= oracle.x_max) break;
      sup = std::max(sup, std::abs(double(cum) / double(est.sample_count) - oracle(x)));
    }
    j["oracle"] = json{{"atom", oracle.atom()}, {"sup_cdf_distance", sup},
                       {"sweeps", oracle.sweeps}};
    if (cfg.write_csv) {
      write_oracle_csv(oracle, cfg.out_dir + "/oracle.csv");
      result.artifacts.push_back("oracle.csv");
    }
  }
  if (!cfg.theta_grid.empty()) {
    // re-simulate a sample vector for the MGF sweep at the configured grid
    ExperimentConfig sub = cfg;
    sub.replications = 1;
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(std::min<long>(cfg.samples, 2000000)));
    const long budget = std::min<long>(cfg.samples, 2000000);
    if (cfg.mode == RunMode::limit) {
      GaussianDrivers drivers(dist, cfg.ca(), replication_seed(cfg.seed, 0, 0x3f9));
      LimitChainState state = initial_limit_state(dist);
      std::vector<double> scratch;
      for (long t = 0; t < detail::default_limit_warmup(); ++t)
        limit_step(state, cfg.beta, dist, drivers, scratch);
      for (long t = 0; t < budget; ++t) {
        limit_step(state, cfg.beta, dist, drivers, scratch);
        samples.push_back(state.q_hat);
      }
    } else {
      const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
      ArrivalSource src(cfg.family, sc.lambda_n, replication_seed(cfg.seed, 0, 0x3fa));
      auto rng = make_stream(replication_seed(cfg.seed, 0, 0x3fb), 2);
      run_embedded(sc, dist, src, default_warmup_slots(sc, dist), budget, rng,
                   [&](const FiniteSystemState&, const SlotOutcome&, const ScaledView& view) {
                     samples.push_back(view.q_hat);
                   });
    }
    j["mgf"] = mgf_to_json(empirical_mgf(samples, cfg.theta_grid));
  }
  result.summary = j;
  if (cfg.write_json) {
    write_text_file(cfg.out_dir + "/exponent.json", j.dump(2) + "\n");
    result.artifacts.push_back("exponent.json");
  }
  if (cfg.write_csv) {
    write_histogram_csv(est, cfg.out_dir + "/histogram.csv");
    result.artifacts.push_back("histogram.csv");
  }
  detail::write_manifest(cfg, result, "exponent");
  return result;
}

/// `drift`: geometric-drift ratios at the configured multiples of the
/// Lyapunov-critical exponent on the limiting chain, plus the quadratic
/// check on the finite chain when mode = finite.
inline RunResult run_drift(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const ServiceDistribution dist = cfg.dist();
  const double theta_c = lyapunov_critical_theta(cfg.beta, cfg.ca(), dist);

  json reports = json::array();
  int idx = 0;
  for (double m : cfg.drift_multipliers) {
    const DriftReport r = drift_check_geometric(
        dist, cfg.beta, cfg.ca(), m * theta_c, cfg.drift_steps,
        replication_seed(cfg.seed, idx++, 0xd1f7));
    json jr = drift_to_json(r);
    jr["theta_multiplier"] = m;
    reports.push_back(jr);
  }
  if (cfg.mode == RunMode::finite) {
    const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
    const DriftReport r = drift_check_quadratic(sc, dist, cfg.family, cfg.drift_steps,
                                                replication_seed(cfg.seed, idx++, 0xd2f8));
    reports.push_back(drift_to_json(r));
  }
  result.summary = json{{"theta_critical", theta_c}, {"reports", reports}};
  if (cfg.write_json) {
    write_text_file(cfg.out_dir + "/drift.json", result.summary.dump(2) + "\n");
    result.artifacts.push_back("drift.json");
  }
  detail::write_manifest(cfg, result, "drift");
  return result;
}

/// `compare`: finite-n versus limiting stationary law across the n list.
inline RunResult run_compare(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  std::vector<int> ns;
  for (long n : cfg.n_list) ns.push_back(static_cast<int>(n));
  const ConvergenceTable table =
      convergence_study(cfg.dist(), cfg.beta, cfg.family, ns, cfg.samples, cfg.seed);
  result.summary = convergence_to_json(table);
  if (cfg.write_json) {
    write_text_file(cfg.out_dir + "/convergence.json", result.summary.dump(2) + "\n");
    result.artifacts.push_back("convergence.json");
  }
  if (cfg.write_csv) {
    write_convergence_csv(table, cfg.out_dir + "/convergence.csv");
    result.artifacts.push_back("convergence.csv");
  }
  detail::write_manifest(cfg, result, "compare");
  return result;
}

/// `simulate-finite`: slot-level trace of the embedded chain.
inline RunResult run_simulate_finite(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const ServiceDistribution dist = cfg.dist();
  const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
  const long warmup = cfg.warmup > 0 ? cfg.warmup : default_warmup_slots(sc, dist);

  std::vector<std::string> header{"t"};
  header.emplace_back("Q");
  for (int k = 1; k <= dist.max_service(); ++k) header.push_back("L_" + std::to_string(k));
  header.emplace_back("A");
  header.emplace_back("J_norm");
  CsvWriter csv(cfg.out_dir + "/trace.csv", header);

  ArrivalSource src(cfg.family, sc.lambda_n, replication_seed(cfg.seed, 0, 0x51e));
  auto rng = make_stream(replication_seed(cfg.seed, 0, 0x52f), 3);
  run_embedded(sc, dist, src, warmup, cfg.samples, rng,
               [&](const FiniteSystemState& s, const SlotOutcome& slot, const ScaledView&) {
                 std::vector<std::string> row{std::to_string(s.t), std::to_string(s.q)};
                 for (long v : s.in_service) row.push_back(std::to_string(v));
                 row.push_back(std::to_string(slot.arrivals));
                 row.push_back(std::to_string(slot.entered));
                 csv.row(row);
               });
  result.artifacts.push_back("trace.csv");
  result.summary = json{{"rows", cfg.samples}};
  detail::write_manifest(cfg, result, "simulate-finite");
  return result;
}

/// `simulate-limit`: step-level trace of the limiting chain.
inline RunResult run_simulate_limit(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const ServiceDistribution dist = cfg.dist();
  const long warmup = cfg.warmup > 0 ? cfg.warmup : detail::default_limit_warmup();

  std::vector<std::string> header{"t", "q_hat"};
  for (int k = 1; k <= dist.max_service(); ++k) header.push_back("l_hat_" + std::to_string(k));
  header.emplace_back("y_hat");
  header.emplace_back("v_hat");
  CsvWriter csv(cfg.out_dir + "/trace.csv", header);

  GaussianDrivers drivers(dist, cfg.ca(), replication_seed(cfg.seed, 0, 0x53a));
  LimitChainState state = initial_limit_state(dist);
  std::vector<double> scratch;
  const long burn = std::max<long>(warmup, dist.max_service() + 1);
  for (long t = 0; t < burn; ++t) limit_step(state, cfg.beta, dist, drivers, scratch);
  for (long t = 0; t < cfg.samples; ++t) {
    limit_step(state, cfg.beta, dist, drivers, scratch);
    std::vector<std::string> row{std::to_string(t + 1), fmt_double(state.q_hat)};
    for (double v : state.l_hat) row.push_back(fmt_double(v));
    row.push_back(fmt_double(state.y_hat()));
    row.push_back(fmt_double(state.v_hat()));
    csv.row(row);
  }
  result.artifacts.push_back("trace.csv");
  result.summary = json{{"rows", cfg.samples}};
  detail::write_manifest(cfg, result, "simulate-limit");
  return result;
}

/// `simulate-event`: continuous-time oracle; per-customer records plus
/// integer-epoch states.
inline RunResult run_simulate_event(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const ServiceDistribution dist = cfg.dist();
  const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
  const double warmup =
      double(cfg.warmup > 0 ? cfg.warmup : default_warmup_slots(sc, dist));

  CsvWriter customers(cfg.out_dir + "/customers.csv", {"arrival_epoch", "wait", "service"});
  std::vector<std::string> header{"t", "Q"};
  for (int k = 1; k <= dist.max_service(); ++k) header.push_back("L_" + std::to_string(k));
  CsvWriter epochs(cfg.out_dir + "/epochs.csv", header);

  ArrivalSource src(cfg.family, sc.lambda_n, replication_seed(cfg.seed, 0, 0x54b));
  EventSim sim(sc.n, dist, replication_seed(cfg.seed, 0, 0x55c));
  long customer_rows = 0;
  sim.run(
      src, warmup, double(cfg.samples),
      [&](const CustomerRecord& r) {
        customers.row({fmt_double(r.arrival_epoch), fmt_double(r.wait),
                       std::to_string(r.service)});
        ++customer_rows;
      },
      [&](double t, long q, const std::vector<long>& l) {
        std::vector<std::string> row{fmt_double(t), std::to_string(q)};
        for (long v : l) row.push_back(std::to_string(v));
        epochs.row(row);
      });
  result.artifacts.push_back("customers.csv");
  result.artifacts.push_back("epochs.csv");
  result.summary = json{{"customers", customer_rows}};
  detail::write_manifest(cfg, result, "simulate-event");
  return result;
}

/// `simulate-arrivals`: slot counts and recurrence of the configured source.
inline RunResult run_simulate_arrivals(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const ServiceDistribution dist = cfg.dist();
  const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
  CsvWriter csv(cfg.out_dir + "/arrivals.csv", {"t", "count", "recurrence"});
  ArrivalSource src(cfg.family, sc.lambda_n, replication_seed(cfg.seed, 0, 0x56d));
  for (long t = 1; t <= cfg.samples; ++t) {
    const auto slot = src.next_slot();
    csv.row({std::to_string(t), std::to_string(slot.count), fmt_double(slot.recurrence)});
  }
  result.artifacts.push_back("arrivals.csv");
  result.summary = json{{"rows", cfg.samples}};
  detail::write_manifest(cfg, result, "simulate-arrivals");
  return result;
}

/// `validate`: short-trajectory invariant sweep across every simulator.
/// Nonzero violations mean a broken build, exit code 4.
inline RunResult run_validate(const ExperimentConfig& cfg) {
  detail::ensure_out_dir(cfg);
  RunResult result;
  const ServiceDistribution dist = cfg.dist();
  json checks = json::array();
  long total_violations = 0;

  {  // limiting chain: window identity, envelope, sandwich
    const Trajectory tr = run_limit_chain(dist, cfg.beta, cfg.ca(), 5000, 20000,
                                          replication_seed(cfg.seed, 0, 0x61a));
    const double residual = y_identity_residual(tr, dist);
    const double scale = y_identity_scale(tr);
    long v = residual <= 1e-9 * scale ? 0 : 1;
    for (int k : {0, 1, 5}) v += y_bounds_check(tr, dist, k);
    for (int j : {0, 1, 5}) v += gamma_sandwich_check(tr, dist, j);
    long y_below_v = 0;
    for (std::size_t t = 0; t < tr.size(); ++t)
      if (tr.y[t] < tr.v[t] - 1e-9 * scale) ++y_below_v;
    v += y_below_v;
    checks.push_back(json{{"check", "limit_chain_identities"},
                          {"identity_residual", residual},
                          {"violations", v}});
    total_violations += v;
  }

  {  // embedded chain: integer conservation and complementarity
    const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
    ArrivalSource src(cfg.family, sc.lambda_n, replication_seed(cfg.seed, 0, 0x62b));
    auto rng = make_stream(replication_seed(cfg.seed, 0, 0x63c), 4);
    FiniteSystemState s = empty_state(sc.n, dist);
    long v = 0;
    for (long t = 0; t < 20000; ++t) {
      const long a = src.next_slot().count;
      const long q_before = s.q;
      const SlotOutcome out = embedded_step(s, dist, a, rng);
      if (s.q != q_before + a - out.entered) ++v;
      if (!s.complementarity_holds()) ++v;
      const ScaledView view = scaled_view(s, out, sc, dist);
      if (std::abs(view.q_hat - std::max(view.y_hat - sc.beta_n, 0.0)) > 1e-9) ++v;
    }
    checks.push_back(json{{"check", "embedded_chain_conservation"}, {"violations", v}});
    total_violations += v;
  }

  {  // event oracle: work conservation and residual bounds at epochs
    const QedScaling sc = qed_scaling(cfg.n, cfg.beta, dist);
    ArrivalSource src(cfg.family, sc.lambda_n, replication_seed(cfg.seed, 0, 0x64d));
    EventSim sim(sc.n, dist, replication_seed(cfg.seed, 0, 0x65e));
    long v = 0;
    sim.run(
        src, 0.0, 2000.0,
        [&](const CustomerRecord& r) {
          if (r.wait < 0.0) ++v;
        },
        [&](double, long q, const std::vector<long>& l) {
          long occupied = 0;
          for (long x : l) occupied += x;
          if (occupied > sc.n) ++v;
          if (q > 0 && occupied != sc.n) ++v;
        });
    checks.push_back(json{{"check", "event_oracle_work_conservation"}, {"violations", v}});
    total_violations += v;
  }

  {  // mix sampler: component sums vanish
    auto rng = make_stream(replication_seed(cfg.seed, 0, 0x66f), 5);
    long v = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto mix = sample_mix_vector(dist, rng);
      double s = 0.0;
      for (double x : mix) s += x;
      if (s != 0.0) ++v;
    }
    checks.push_back(json{{"check", "mix_sampler_zero_sum"}, {"violations", v}});
    total_violations += v;
  }

  result.summary = json{{"checks", checks}, {"total_violations", total_violations}};
  result.exit_code = total_violations == 0 ? 0 : 4;
  if (cfg.write_json) {
    write_text_file(cfg.out_dir + "/validate.json", result.summary.dump(2) + "\n");
    result.artifacts.push_back("validate.json");
  }
  detail::write_manifest(cfg, result, "validate");
  return result;
}

/// `run`: dispatch on the config's mode.
inline RunResult run_config(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case RunMode::model: return run_model(cfg);
    case RunMode::limit:
    case RunMode::finite: return run_exponent(cfg);
    case RunMode::event: return run_simulate_event(cfg);
    case RunMode::compare: return run_compare(cfg);
    case RunMode::validate: return run_validate(cfg);
  }
  fail(errc::config_error, "unhandled run mode");
}

}  // namespace qed
