#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qed/errors.hpp"
#include "qed/rng.hpp"
#include "qed/service.hpp"

namespace qed {

/// Gaussian drivers of the limiting chain: arrival noise N(0, mu c_a^2) and
/// the singular service-mix vector with covariance mu Sigma. The mix vector
/// is built from independent G_l ~ N(0, mu p_l) as J_k = G_k - p_k sum(G),
/// which realizes the covariance exactly; the last component is closed so the
/// vector sums to zero bit-exactly.
class GaussianDrivers {
 public:
  GaussianDrivers(const ServiceDistribution& dist, double ca, std::uint64_t seed)
      : p_(dist.pmf()), rng_(make_stream(seed, 0x11435c3u)) {
    const double mu = dist.mu();
    a_std_ = std::sqrt(mu) * ca;
    g_std_.resize(p_.size());
    for (std::size_t i = 0; i < p_.size(); ++i) g_std_[i] = std::sqrt(mu * p_[i]);
  }

  double arrival_variance() const { return a_std_ * a_std_; }

  double sample_arrival_noise() { return a_std_ * normal_(rng_); }

  void sample_mix_vector(std::vector<double>& out) {
    const std::size_t k = p_.size();
    out.resize(k);
    if (k == 1) {
      out[0] = 0.0;
      return;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = g_std_[i] * normal_(rng_);
      total += out[i];
    }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      out[i] -= p_[i] * total;
      partial += out[i];
    }
    out[k - 1] = -partial;
  }

  RngEngine& engine() { return rng_; }

 private:
  std::vector<double> p_;
  double a_std_ = 0.0;
  std::vector<double> g_std_;
  RngEngine rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// One-shot mix-vector draw with law N(0, mu Sigma).
inline std::vector<double> sample_mix_vector(const ServiceDistribution& dist, RngEngine& rng) {
  const auto& p = dist.pmf();
  const double mu = dist.mu();
  std::vector<double> out(p.size());
  if (p.size() == 1) return out;
  std::normal_distribution<double> normal(0.0, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i] = std::sqrt(mu * p[i]) * normal(rng);
    total += out[i];
  }
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    out[i] -= p[i] * total;
    partial += out[i];
  }
  out[p.size() - 1] = -partial;
  return out;
}

/// Continuous state (Q_hat, L_hat) of the limiting chain plus the K-deep
/// histories of Y_hat and Z_hat needed by the windowed identities. The
/// complementarity q_hat (sum l_hat - beta) = 0 and sum l_hat <= beta hold
/// after every step; queue dust below 1e-12 is snapped to zero so the atom at
/// zero stays exact.
struct LimitChainState {
  long t = 0;
  double q_hat = 0.0;
  std::vector<double> l_hat;   // K components
  std::vector<double> y_hist;  // ring: y_hist[t % K] = Y_hat at time t
  std::vector<double> z_hist;  // ring of rows: row (t % K) = Z_hat at time t

  int K() const { return static_cast<int>(l_hat.size()); }

  double y_hat() const {
    double s = q_hat;
    for (double v : l_hat) s += v;
    return s;
  }

  double y_at(long time) const {
    assert(time >= 0 && time <= t && t - time < long(l_hat.size()));
    return y_hist[static_cast<std::size_t>(time % long(l_hat.size()))];
  }

  const double* z_row(long time) const {
    assert(time >= 1 && time <= t && t - time < long(l_hat.size()));
    return z_hist.data() + static_cast<std::size_t>(time % long(l_hat.size())) * l_hat.size();
  }

  /// Windowed noise sum V_hat_t = sum_{i=1..K} sum_{j=i..K} Z_hat_{t+1-i,j}.
  /// Defined once K steps of history exist (t >= K).
  double v_hat() const {
    const int k = K();
    assert(t >= k);
    double s = 0.0;
    for (int i = 1; i <= k; ++i) {
      const double* z = z_row(t + 1 - i);
      for (int j = i; j <= k; ++j) s += z[j - 1];
    }
    return s;
  }

  /// alpha . Zbar_t with alpha_{k,j} = (j-k)^+ over the K-deep Z history.
  double alpha_dot_zbar() const {
    const int k = K();
    assert(t >= k);
    double s = 0.0;
    for (int i = 1; i <= k; ++i) {
      const double* z = z_row(t + 1 - i);
      for (int j = i + 1; j <= k; ++j) s += double(j - i) * z[j - 1];
    }
    return s;
  }
};

inline LimitChainState initial_limit_state(const ServiceDistribution& dist) {
  LimitChainState s;
  const std::size_t k = dist.pmf().size();
  s.l_hat.assign(k, 0.0);
  s.y_hist.assign(k, 0.0);
  s.z_hist.assign(k * k, 0.0);
  return s;
}

/// One transition with explicit noise values (used by both the sampling
/// driver and fixtures): entry-count noise is the minimum of queue-side and
/// server-side capacity, the queue reflects at zero, and L_hat shifts left
/// with the mix noise plus p times the entry-count noise entering.
inline void limit_step_with(LimitChainState& s, double beta, const ServiceDistribution& dist,
                            double a_hat, const std::vector<double>& j_mix) {
  const auto& p = dist.pmf();
  const std::size_t k = p.size();
  assert(s.l_hat.size() == k && j_mix.size() == k);

  double tail_sum = 0.0;  // sum_{i=2..K} L_hat_{t,i}
  for (std::size_t i = 1; i < k; ++i) tail_sum += s.l_hat[i];

  const double j_hat = std::min(s.q_hat + a_hat, beta - tail_sum);
  double q_next = s.q_hat + a_hat + tail_sum - beta;
  q_next = q_next > 0.0 ? q_next : 0.0;
  if (q_next < 1e-12) q_next = 0.0;

  for (std::size_t i = 0; i + 1 < k; ++i) s.l_hat[i] = s.l_hat[i + 1] + j_mix[i] + j_hat * p[i];
  s.l_hat[k - 1] = j_mix[k - 1] + j_hat * p[k - 1];
  s.q_hat = q_next;
  ++s.t;

  double* z = s.z_hist.data() + static_cast<std::size_t>(s.t % long(k)) * k;
  for (std::size_t i = 0; i < k; ++i) z[i] = j_mix[i] + p[i] * a_hat;
  s.y_hist[static_cast<std::size_t>(s.t % long(k))] = s.y_hat();
}

inline void limit_step(LimitChainState& s, double beta, const ServiceDistribution& dist,
                       GaussianDrivers& drivers, std::vector<double>& j_scratch) {
  drivers.sample_mix_vector(j_scratch);
  limit_step_with(s, beta, dist, drivers.sample_arrival_noise(), j_scratch);
}

/// Recorded window of a limit-chain run: per step the queue, total-customer
/// and windowed-noise values plus alpha . Zbar. All recorded steps have full
/// histories (the driver burns in at least K steps before recording).
struct Trajectory {
  int K = 0;
  double beta = 0.0;
  std::vector<double> q;   // Q_hat
  std::vector<double> y;   // Y_hat
  std::vector<double> v;   // V_hat
  std::vector<double> az;  // alpha . Zbar

  std::size_t size() const { return y.size(); }
};

inline Trajectory run_limit_chain(const ServiceDistribution& dist, double beta, double ca,
                                  long warmup, long steps, std::uint64_t seed) {
  GaussianDrivers drivers(dist, ca, seed);
  LimitChainState s = initial_limit_state(dist);
  std::vector<double> j_scratch;
  const long burn = std::max<long>(warmup, dist.max_service() + 1);
  for (long i = 0; i < burn; ++i) limit_step(s, beta, dist, drivers, j_scratch);

  Trajectory tr;
  tr.K = dist.max_service();
  tr.beta = beta;
  tr.q.reserve(static_cast<std::size_t>(steps));
  tr.y.reserve(static_cast<std::size_t>(steps));
  tr.v.reserve(static_cast<std::size_t>(steps));
  tr.az.reserve(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) {
    limit_step(s, beta, dist, drivers, j_scratch);
    tr.q.push_back(s.q_hat);
    tr.y.push_back(s.y_hist[static_cast<std::size_t>(s.t % long(tr.K))]);
    tr.v.push_back(s.v_hat());
    tr.az.push_back(s.alpha_dot_zbar());
  }
  return tr;
}

}  // namespace qed
