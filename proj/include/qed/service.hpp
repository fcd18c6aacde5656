#pragma once

#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qed/errors.hpp"

namespace qed {

/// Validated lattice service-time law on {1..K}, with the derived quantities
/// used throughout: mean (1/mu), standard deviation, coefficient of variation
/// and the tail vector.
///
/// Invariants established at construction:
///  - p_k >= 0, sum p_k = 1 (inputs off by more than 1e-9 are rejected,
///    smaller deviations renormalized), p_K > 0, no mass at or below 0;
///  - gcd of the support is 1 (callers must rescale the time unit otherwise);
///  - tail_k = sum_{j>=k} p_j, so tail_1 = 1 and tail is non-increasing.
class ServiceDistribution {
 public:
  static ServiceDistribution from_mass(const std::map<int, double>& mass) {
    if (mass.empty()) fail(errc::not_normalized, "empty service mass map");
    int max_k = 0;
    double total = 0.0;
    for (const auto& [k, w] : mass) {
      if (w < 0.0) fail(errc::not_normalized, "negative mass at k=" + std::to_string(k));
      if (w > 0.0 && k <= 0)
        fail(errc::zero_service_mass,
             "mass at k=" + std::to_string(k) + "; instantaneous service is not allowed");
      if (w > 0.0) max_k = std::max(max_k, k);
      total += w;
    }
    if (max_k == 0) fail(errc::not_normalized, "no positive mass");
    if (std::abs(total - 1.0) > 1e-9)
      fail(errc::not_normalized, "mass sums to " + std::to_string(total));

    std::vector<double> p(static_cast<std::size_t>(max_k), 0.0);
    for (const auto& [k, w] : mass)
      if (w > 0.0 && k >= 1) p[static_cast<std::size_t>(k - 1)] = w / total;

    int g = 0;
    for (int k = 1; k <= max_k; ++k)
      if (p[static_cast<std::size_t>(k - 1)] > 0.0) g = std::gcd(g, k);
    if (g != 1)
      fail(errc::lattice_not_reduced,
           "support gcd is " + std::to_string(g) + "; rescale the time unit");

    return ServiceDistribution(std::move(p));
  }

  int max_service() const { return K_; }
  const std::vector<double>& pmf() const { return p_; }
  const std::vector<double>& tail() const { return tail_; }

  /// p_k for k in 1..K (0 outside).
  double pmf_at(int k) const {
    return (k >= 1 && k <= K_) ? p_[static_cast<std::size_t>(k - 1)] : 0.0;
  }
  /// P[S >= k] for k in 1..K (1 below, 0 above).
  double tail_at(int k) const {
    if (k < 1) return 1.0;
    return k <= K_ ? tail_[static_cast<std::size_t>(k - 1)] : 0.0;
  }

  double mean_service() const { return mean_; }  // E S = 1/mu
  double mu() const { return 1.0 / mean_; }      // service completion rate
  double sigma_s() const { return sigma_; }      // standard deviation of S
  double cs() const { return sigma_ / mean_; }   // coefficient of variation

  bool deterministic() const { return K_ == 1; }

  /// Smallest k with p_k > 0.
  int min_support() const {
    for (int k = 1; k <= K_; ++k)
      if (pmf_at(k) > 0.0) return k;
    return K_;
  }

 private:
  explicit ServiceDistribution(std::vector<double> p) : p_(std::move(p)) {
    K_ = static_cast<int>(p_.size());
    tail_.assign(p_.size(), 0.0);
    double acc = 0.0;
    for (int k = K_; k >= 1; --k) {
      acc += p_[static_cast<std::size_t>(k - 1)];
      tail_[static_cast<std::size_t>(k - 1)] = acc;
    }
    mean_ = 0.0;
    double m2 = 0.0;
    for (int k = 1; k <= K_; ++k) {
      const double w = p_[static_cast<std::size_t>(k - 1)];
      mean_ += double(k) * w;
      m2 += double(k) * double(k) * w;
    }
    sigma_ = std::sqrt(std::max(0.0, m2 - mean_ * mean_));
  }

  std::vector<double> p_;     // p_1..p_K
  std::vector<double> tail_;  // tail_1..tail_K
  int K_ = 0;
  double mean_ = 0.0;
  double sigma_ = 0.0;
};

}  // namespace qed
