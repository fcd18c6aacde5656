#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qed/errors.hpp"
#include "qed/rng.hpp"
#include "qed/stats.hpp"

namespace qed {

enum class ArrivalKind { deterministic, exponential, erlang, hyperexponential, uniform };

/// Renewal interarrival family with unit-mean base variable. The rate is
/// applied as a pure time scale, so the coefficient of variation is a family
/// property: 0 (deterministic), 1 (exponential), 1/sqrt(k) (erlang-k),
/// 1/sqrt(3) (uniform on (0,2)) or the configured value > 1 for the balanced
/// two-phase hyperexponential.
struct ArrivalFamily {
  ArrivalKind kind = ArrivalKind::exponential;
  int shape = 1;      // erlang stage count
  double cv = 1.0;    // hyperexponential target c_a

  static ArrivalFamily deterministic() { return {ArrivalKind::deterministic, 1, 0.0}; }
  static ArrivalFamily exponential() { return {ArrivalKind::exponential, 1, 1.0}; }
  static ArrivalFamily erlang(int k) {
    if (k < 1) fail(errc::unsupported_cv, "erlang shape must be >= 1");
    return {ArrivalKind::erlang, k, 1.0 / std::sqrt(double(k))};
  }
  static ArrivalFamily hyperexponential(double ca) {
    if (!(ca > 1.0)) fail(errc::unsupported_cv, "hyperexponential requires c_a > 1");
    return {ArrivalKind::hyperexponential, 2, ca};
  }
  static ArrivalFamily uniform0_2() { return {ArrivalKind::uniform, 1, 1.0 / std::sqrt(3.0)}; }

  double ca() const {
    switch (kind) {
      case ArrivalKind::deterministic: return 0.0;
      case ArrivalKind::exponential: return 1.0;
      case ArrivalKind::erlang: return 1.0 / std::sqrt(double(shape));
      case ArrivalKind::hyperexponential: return cv;
      case ArrivalKind::uniform: return 1.0 / std::sqrt(3.0);
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case ArrivalKind::deterministic: return "deterministic";
      case ArrivalKind::exponential: return "exponential";
      case ArrivalKind::erlang: return "erlang(" + std::to_string(shape) + ")";
      case ArrivalKind::hyperexponential: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "hyperexp(%g)", cv);
        return buf;
      }
      case ArrivalKind::uniform: return "uniform";
    }
    return "?";
  }
};

/// Stationary renewal arrival stream. The first interarrival interval is
/// drawn from the stationary-excess law of the family, so slot counts and the
/// backward recurrence time are in equilibrium from time zero.
class ArrivalSource {
 public:
  ArrivalSource(ArrivalFamily family, double rate, std::uint64_t seed)
      : family_(family), rate_(rate), rng_(make_stream(seed, 0x9a7a11a1u)) {
    if (!(rate > 0.0)) fail(errc::overloaded, "arrival rate must be positive");
    if (family.kind == ArrivalKind::hyperexponential) {
      if (!(family.cv > 1.0)) fail(errc::unsupported_cv, "hyperexponential requires c_a > 1");
      const double c2 = family.cv * family.cv;
      const double r = std::sqrt((c2 - 1.0) / (c2 + 1.0));
      hyper_q1_ = 0.5 * (1.0 + r);
      hyper_nu1_ = 2.0 * hyper_q1_;        // balanced means: q_i / nu_i = 1/2
      hyper_nu2_ = 2.0 * (1.0 - hyper_q1_);
    }
    next_epoch_ = sample_equilibrium_excess() / rate_;
    current_gap_ = next_epoch_;
    last_epoch_ = 0.0;
  }

  double rate() const { return rate_; }
  const ArrivalFamily& family() const { return family_; }

  double peek_epoch() const { return next_epoch_; }

  /// Consumes and returns the next arrival epoch (absolute time).
  double next_epoch() {
    const double e = next_epoch_;
    last_epoch_ = e;
    const double gap = sample_interarrival();
    current_gap_ = gap;
    next_epoch_ = e + gap;
    return e;
  }

  struct Slot {
    long count = 0;
    double recurrence = 0.0;  // backward recurrence time at the slot boundary
  };

  /// Advances exactly one time unit and reports the arrivals in (t-1, t]
  /// together with the recurrence time at t.
  Slot next_slot() {
    now_ += 1.0;
    Slot s;
    while (next_epoch_ <= now_) {
      next_epoch();
      ++s.count;
    }
    s.recurrence = now_ - last_epoch_;
    return s;
  }

  double now() const { return now_; }

 private:
  double sample_interarrival() { return sample_base() / rate_; }

  double sample_base() {
    switch (family_.kind) {
      case ArrivalKind::deterministic:
        return 1.0;
      case ArrivalKind::exponential:
        return expo(1.0);
      case ArrivalKind::erlang: {
        // sum of `shape` exponential stages, each with rate `shape`
        double s = 0.0;
        for (int i = 0; i < family_.shape; ++i) s += expo(double(family_.shape));
        return s;
      }
      case ArrivalKind::hyperexponential:
        return uniform01(rng_) < hyper_q1_ ? expo(hyper_nu1_) : expo(hyper_nu2_);
      case ArrivalKind::uniform:
        return 2.0 * uniform01(rng_);
    }
    return 1.0;
  }

  /// Stationary-excess draw of the unit-mean base variable.
  double sample_equilibrium_excess() {
    switch (family_.kind) {
      case ArrivalKind::deterministic:
        // equilibrium phase of a deterministic renewal is uniform
        return uniform01(rng_);
      case ArrivalKind::exponential:
        // memoryless: excess is again exponential
        return expo(1.0);
      case ArrivalKind::erlang: {
        // excess of an erlang(k) is a uniform mixture over stages 1..k
        const int stages = 1 + int(uniform01(rng_) * family_.shape);
        double s = 0.0;
        for (int i = 0; i < std::min(stages, family_.shape); ++i) s += expo(double(family_.shape));
        return s;
      }
      case ArrivalKind::hyperexponential:
        // balanced means make the excess an equal mixture of the two phases
        return uniform01(rng_) < 0.5 ? expo(hyper_nu1_) : expo(hyper_nu2_);
      case ArrivalKind::uniform: {
        // inverse CDF of the excess density (1 - x/2) on (0,2)
        const double u = uniform01(rng_);
        return 2.0 - 2.0 * std::sqrt(1.0 - u);
      }
    }
    return 1.0;
  }

  double expo(double rate) {
    return -std::log1p(-uniform01(rng_)) / rate;
  }

  ArrivalFamily family_;
  double rate_ = 1.0;
  RngEngine rng_;
  double now_ = 0.0;
  double next_epoch_ = 0.0;
  double last_epoch_ = 0.0;
  double current_gap_ = 0.0;
  double hyper_q1_ = 0.5, hyper_nu1_ = 1.0, hyper_nu2_ = 1.0;
};

inline ArrivalSource make_source(ArrivalFamily family, double rate, std::uint64_t seed) {
  return ArrivalSource(family, rate, seed);
}

/// Number of arrivals of a freshly equilibrated stream in (0, length].
inline long stationary_window_count(ArrivalFamily family, double rate, double length,
                                    std::uint64_t seed) {
  ArrivalSource src(family, rate, seed);
  long c = 0;
  while (src.peek_epoch() <= length) {
    src.next_epoch();
    ++c;
  }
  return c;
}

struct CltRow {
  double rate = 0.0;
  long slots = 0;
  double mean_std = 0.0;       // mean of (A_t - lambda)/sqrt(lambda)
  double var_std = 0.0;        // variance of (A_t - lambda)/sqrt(lambda)
  double var_se = 0.0;         // moment-based standard error of var_std
  double ca_squared = 0.0;     // family target
  bool flagged = false;        // variance off target beyond 3 SE (+ lattice floor)
};

/// Empirical check that standardized slot counts match the family's Gaussian
/// limit: for each rate, the variance of (A_t - lambda)/sqrt(lambda) should
/// approach c_a^2. The 2/lambda floor absorbs the integer-lattice variance of
/// low-variability families.
inline std::vector<CltRow> clt_selfcheck(ArrivalFamily family, const std::vector<double>& rates,
                                         long slots, std::uint64_t seed) {
  if (slots < 10000) fail(errc::too_few_samples, "clt_selfcheck needs at least 1e4 slots");
  std::vector<CltRow> rows;
  std::uint64_t stream = 0;
  for (double rate : rates) {
    ArrivalSource src(family, rate, seed + 1315423911ull * ++stream);
    std::vector<double> z(static_cast<std::size_t>(slots));
    const double root = std::sqrt(rate);
    for (long t = 0; t < slots; ++t)
      z[static_cast<std::size_t>(t)] = (double(src.next_slot().count) - rate) / root;
    const Moments m = moments(z);
    double m4 = 0.0;
    for (double v : z) {
      const double d = v - m.mean;
      m4 += d * d * d * d;
    }
    m4 /= double(slots);
    CltRow row;
    row.rate = rate;
    row.slots = slots;
    row.mean_std = m.mean;
    row.var_std = m.variance;
    row.var_se = std::sqrt(std::max(0.0, m4 - m.variance * m.variance) / double(slots));
    row.ca_squared = family.ca() * family.ca();
    row.flagged =
        std::abs(row.var_std - row.ca_squared) > 3.0 * row.var_se + 2.0 / rate;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qed
