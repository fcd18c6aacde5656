#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qed/errors.hpp"

namespace qed {

struct MgfPoint {
  double theta = 0.0;
  double estimate = 0.0;      // sample mean of exp(theta x)
  double se = 0.0;            // standard error of the mean
  double top_share = 0.0;     // contribution of the 10 largest samples
  bool unreliable = false;    // top_share > 1/2: the estimate rides on extremes
};

/// Empirical moment generating function over a theta grid. Estimates whose
/// top ten order statistics carry more than half the mass are flagged; past
/// the finite-MGF threshold that share tends to one.
inline std::vector<MgfPoint> empirical_mgf(const std::vector<double>& samples,
                                           const std::vector<double>& thetas) {
  if (samples.size() < 100000)
    fail(errc::too_few_samples, "empirical_mgf needs at least 1e5 samples");

  std::vector<double> top(samples.begin(), samples.end());
  const std::size_t keep = 10;
  std::partial_sort(top.begin(), top.begin() + keep, top.end(), std::greater<>());
  top.resize(keep);

  std::vector<MgfPoint> out;
  out.reserve(thetas.size());
  for (double theta : thetas) {
    MgfPoint pt;
    pt.theta = theta;
    double sum = 0.0, sum2 = 0.0;
    for (double x : samples) {
      const double e = std::exp(theta * x);
      sum += e;
      sum2 += e * e;
    }
    const double n = double(samples.size());
    pt.estimate = sum / n;
    pt.se = std::sqrt(std::max(0.0, sum2 / n - pt.estimate * pt.estimate) / n);
    double top_sum = 0.0;
    for (double x : top) top_sum += std::exp(theta * x);
    pt.top_share = sum > 0.0 ? top_sum / sum : 0.0;
    pt.unreliable = pt.top_share > 0.5;
    out.push_back(pt);
  }
  return out;
}

}  // namespace qed
