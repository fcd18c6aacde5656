#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace qed {

using RngEngine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives an independent engine for (root seed, stream index). Streams are
/// reproducible and do not depend on scheduling: the same pair always yields
/// the same engine state.
inline RngEngine make_stream(std::uint64_t root_seed, std::uint64_t stream_index) {
  std::uint64_t s = root_seed ^ (0xd1b54a32d192ed03ull * (stream_index + 1));
  const std::uint32_t w[8] = {
      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32),
      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32),
      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32),
      static_cast<std::uint32_t>(splitmix64(s)), static_cast<std::uint32_t>(splitmix64(s) >> 32)};
  std::seed_seq seq(w, w + 8);
  return RngEngine(seq);
}

inline double uniform01(RngEngine& rng) {
  // 53-bit mantissa draw in [0,1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace detail {

inline double log_binom_pmf(long m, long k, double p) {
  return std::lgamma(double(m) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(m - k) + 1.0) + double(k) * std::log(p) +
         double(m - k) * std::log1p(-p);
}

// CDF walk from zero. Exact inversion, O(m p) expected steps.
inline long binomial_inversion_small(RngEngine& rng, long m, double p) {
  const double q = 1.0 - p;
  double pk = std::pow(q, double(m));
  double cdf = pk;
  const double u = uniform01(rng);
  long k = 0;
  while (u > cdf && k < m) {
    pk *= (double(m - k) / double(k + 1)) * (p / q);
    ++k;
    cdf += pk;
  }
  return k;
}

// Inversion ordered by descending mass from the mode outward. Exact and free
// of normal approximation; expected O(sqrt(m p q)) steps.
inline long binomial_inversion_mode(RngEngine& rng, long m, double p) {
  const long mode = static_cast<long>(std::floor(double(m + 1) * p));
  double pm = std::exp(log_binom_pmf(m, mode, p));
  const double u = uniform01(rng);
  double acc = pm;
  if (u <= acc) return mode;

  long lo = mode, hi = mode;
  double plo = pm, phi = pm;
  const double q = 1.0 - p;
  while (lo > 0 || hi < m) {
    double next_lo = 0.0, next_hi = 0.0;
    if (lo > 0) next_lo = plo * (double(lo) / double(m - lo + 1)) * (q / p);
    if (hi < m) next_hi = phi * (double(m - hi) / double(hi + 1)) * (p / q);
    if (next_hi >= next_lo) {
      ++hi;
      phi = next_hi;
      acc += phi;
      if (u <= acc) return hi;
    } else {
      --lo;
      plo = next_lo;
      acc += plo;
      if (u <= acc) return lo;
    }
  }
  // Accumulated mass fell short of u by floating-point dust.
  return mode;
}

}  // namespace detail

/// Exact binomial sampler (inversion; no normal approximation at any size).
inline long sample_binomial(RngEngine& rng, long m, double p) {
  if (m <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return m;
  if (p > 0.5) return m - sample_binomial(rng, m, 1.0 - p);
  if (double(m) * p < 30.0) return detail::binomial_inversion_small(rng, m, p);
  return detail::binomial_inversion_mode(rng, m, p);
}

/// Multinomial draw via sequential conditional binomials. Component k is
/// binomial over the remaining trials with the renormalized probability.
inline void sample_multinomial(RngEngine& rng, long m, const std::vector<double>& p,
                               std::vector<long>& out) {
  const std::size_t k = p.size();
  out.assign(k, 0);
  if (k == 0) return;
  long rem = m;
  double tail = 0.0;
  for (double v : p) tail += v;
  for (std::size_t i = 0; i + 1 < k && rem > 0; ++i) {
    if (p[i] <= 0.0) continue;
    // All mass past i is zero: the conditional probability is exactly one.
    double cond = (tail <= p[i]) ? 1.0 : p[i] / tail;
    if (cond > 1.0) cond = 1.0;
    const long c = sample_binomial(rng, rem, cond);
    out[i] = c;
    rem -= c;
    tail -= p[i];
  }
  out[k - 1] = rem;
}

inline std::vector<long> sample_multinomial(RngEngine& rng, long m, const std::vector<double>& p) {
  std::vector<long> out;
  sample_multinomial(rng, m, p, out);
  return out;
}

}  // namespace qed
