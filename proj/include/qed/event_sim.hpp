#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <vector>

#include "qed/arrivals.hpp"
#include "qed/rng.hpp"
#include "qed/scaling.hpp"
#include "qed/service.hpp"

namespace qed {

struct CustomerRecord {
  double arrival_epoch = 0.0;
  double wait = 0.0;
  int service = 0;
};

/// Continuous-time FCFS oracle with exact arrival epochs and integer service
/// durations. Ties between a departure and an arrival at the same epoch are
/// resolved departure-first, so servers freed within a slot are available to
/// that slot's arrivals. At every integer epoch the (Q, L) state is computed
/// from residual service times and reported; states and customer records are
/// emitted once their epoch passes `warmup_time`.
///
/// Work conservation (no idle server while the queue is nonempty) is asserted
/// per event.
class EventSim {
 public:
  EventSim(int n, const ServiceDistribution& dist, std::uint64_t seed)
      : n_(n), dist_(dist), rng_(make_stream(seed, 0xe7e471u)) {}

  template <class OnCustomer, class OnEpoch>
  void run(ArrivalSource& src, double warmup_time, double horizon, OnCustomer&& on_customer,
           OnEpoch&& on_epoch) {
    const int K = dist_.max_service();
    std::vector<long> l_buckets(static_cast<std::size_t>(K));
    double next_sample = 1.0;
    const double end = warmup_time + horizon;
    std::discrete_distribution<int> service_dist(dist_.pmf().begin(), dist_.pmf().end());

    while (next_sample <= end) {
      const double arr = src.peek_epoch();
      const double dep = departures_.empty() ? std::numeric_limits<double>::infinity()
                                             : departures_.front();
      // departure-first on epoch ties; state sampling last at equal epochs
      if (dep <= arr && dep <= next_sample) {
        pop_departure();
        if (!waiting_.empty()) {
          const double w = dep - waiting_.front();
          waiting_.pop_front();
          const int s = 1 + service_dist(rng_);
          push_departure(dep + s);
          if (dep > warmup_time)
            on_customer(CustomerRecord{dep - w, w, s});
        }
        assert(waiting_.empty() || long(departures_.size()) == long(n_));
        continue;
      }
      if (arr <= next_sample) {
        src.next_epoch();
        if (long(departures_.size()) < long(n_)) {
          const int s = 1 + service_dist(rng_);
          push_departure(arr + s);
          if (arr > warmup_time) on_customer(CustomerRecord{arr, 0.0, s});
        } else {
          waiting_.push_back(arr);
        }
        continue;
      }
      // sample (Q, L) at the integer epoch
      if (next_sample > warmup_time) {
        std::fill(l_buckets.begin(), l_buckets.end(), 0);
        for (double d : departures_) {
          const double residual = d - next_sample;
          assert(residual > 0.0);
          const int k = static_cast<int>(std::ceil(residual - 1e-12));
          assert(k >= 1 && k <= K);
          ++l_buckets[static_cast<std::size_t>(k - 1)];
        }
        on_epoch(next_sample, static_cast<long>(waiting_.size()), l_buckets);
      }
      next_sample += 1.0;
    }
  }

 private:
  void push_departure(double epoch) {
    departures_.push_back(epoch);
    std::push_heap(departures_.begin(), departures_.end(), std::greater<>());
  }
  void pop_departure() {
    std::pop_heap(departures_.begin(), departures_.end(), std::greater<>());
    departures_.pop_back();
  }

  int n_;
  const ServiceDistribution& dist_;
  RngEngine rng_;
  std::vector<double> departures_;  // min-heap of pending departure epochs
  std::deque<double> waiting_;      // arrival epochs of queued customers, FCFS
};

/// Convenience wrapper for the scaled system.
template <class OnCustomer, class OnEpoch>
void run_event_sim(const QedScaling& sc, const ServiceDistribution& dist, ArrivalSource& src,
                   double warmup_time, double horizon, std::uint64_t seed,
                   OnCustomer&& on_customer, OnEpoch&& on_epoch) {
  EventSim sim(sc.n, dist, seed);
  sim.run(src, warmup_time, horizon, on_customer, on_epoch);
}

}  // namespace qed
