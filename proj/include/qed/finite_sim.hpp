#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <vector>

#include "qed/arrivals.hpp"
#include "qed/errors.hpp"
#include "qed/rng.hpp"
#include "qed/scaling.hpp"
#include "qed/service.hpp"

namespace qed {

/// Integer state of the n-server system observed at slot boundaries:
/// Q waiting customers and the residual-occupancy vector L, where L_k counts
/// customers in service with remaining work in (k-1, k].
struct FiniteSystemState {
  long t = 0;
  long q = 0;
  std::vector<long> in_service;  // L_1..L_K
  int n = 0;

  long occupied() const {
    long s = 0;
    for (long v : in_service) s += v;
    return s;
  }

  bool complementarity_holds() const { return q * (long(n) - occupied()) == 0; }
};

inline FiniteSystemState empty_state(int n, const ServiceDistribution& dist) {
  FiniteSystemState s;
  s.n = n;
  s.in_service.assign(static_cast<std::size_t>(dist.max_service()), 0);
  return s;
}

struct SlotOutcome {
  long arrivals = 0;
  long entered = 0;           // ||J||
  std::vector<long> entries;  // J_1..J_K split by service requirement
};

/// One slot of the embedded chain. Entries into service are capped by the
/// queue plus new arrivals on one side and by idle servers plus the servers
/// freed within the slot on the other; the split over service requirements is
/// multinomial given the total. Integer conservation
/// Q' = Q + A - ||J|| and complementarity hold exactly.
inline SlotOutcome embedded_step(FiniteSystemState& s, const ServiceDistribution& dist,
                                 long arrivals, RngEngine& rng) {
  assert(arrivals >= 0 && s.q >= 0);
  const long occupied = s.occupied();
  const long freeable = long(s.n) - occupied + s.in_service[0];
  SlotOutcome out;
  out.arrivals = arrivals;
  out.entered = std::min(s.q + arrivals, freeable);
  sample_multinomial(rng, out.entered, dist.pmf(), out.entries);

  const std::size_t k = s.in_service.size();
  for (std::size_t i = 0; i + 1 < k; ++i)
    s.in_service[i] = s.in_service[i + 1] + out.entries[i];
  s.in_service[k - 1] = out.entries[k - 1];
  s.q = s.q + arrivals - out.entered;
  ++s.t;

  assert(s.q >= 0);
  assert(s.occupied() <= s.n);
  assert(s.complementarity_holds());
  return out;
}

/// Centered and scaled view of one slot, per the sqrt(n) scaling:
/// q_hat = Q/sqrt(n), l_hat = (L - lambda tail_p)/sqrt(n), and the arrival,
/// entry-count and entry-mix noises.
struct ScaledView {
  double a_hat = 0.0;
  double q_hat = 0.0;
  double j_hat = 0.0;
  double y_hat = 0.0;
  std::vector<double> l_hat;
  std::vector<double> z_hat;  // entry-mix noise plus p * a_hat
};

inline ScaledView scaled_view(const FiniteSystemState& s, const SlotOutcome& slot,
                              const QedScaling& sc, const ServiceDistribution& dist) {
  ScaledView v;
  const double root = sc.sqrt_n();
  v.a_hat = (double(slot.arrivals) - sc.lambda_n) / root;
  v.q_hat = double(s.q) / root;
  v.j_hat = (double(slot.entered) - sc.lambda_n) / root;
  const auto& p = dist.pmf();
  const auto& tail = dist.tail();
  const std::size_t k = p.size();
  v.l_hat.resize(k);
  v.z_hat.resize(k);
  double sum_l = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    v.l_hat[i] = (double(s.in_service[i]) - sc.lambda_n * tail[i]) / root;
    sum_l += v.l_hat[i];
    const double j_mix = (double(slot.entries[i]) - double(slot.entered) * p[i]) / root;
    v.z_hat[i] = j_mix + p[i] * v.a_hat;
  }
  v.y_hat = sum_l + v.q_hat;
  return v;
}

/// Default warmup before sampling: twenty busy cycles of the whole server
/// pool, measured in slots.
inline long default_warmup_slots(const QedScaling& sc, const ServiceDistribution& dist) {
  return std::lround(20.0 * double(sc.n) * dist.mean_service());
}

/// Drives the embedded chain from the empty state with slot counts taken from
/// the arrival source; emits (state, slot, view) for each post-warmup slot.
template <class Emit>
void run_embedded(const QedScaling& sc, const ServiceDistribution& dist, ArrivalSource& src,
                  long warmup_slots, long sample_slots, RngEngine& rng, Emit&& emit) {
  if (warmup_slots < 0 || sample_slots < 0)
    fail(errc::too_few_samples, "negative slot counts");
  FiniteSystemState s = empty_state(sc.n, dist);
  for (long t = 0; t < warmup_slots; ++t) {
    const long a = src.next_slot().count;
    embedded_step(s, dist, a, rng);
  }
  for (long t = 0; t < sample_slots; ++t) {
    const long a = src.next_slot().count;
    const SlotOutcome slot = embedded_step(s, dist, a, rng);
    emit(s, slot, scaled_view(s, slot, sc, dist));
  }
}

}  // namespace qed
