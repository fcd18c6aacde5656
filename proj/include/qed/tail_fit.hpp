#pragma once

#include <cmath>
#include <vector>

#include "qed/errors.hpp"
#include "qed/estimate.hpp"
#include "qed/stats.hpp"

namespace qed {

/// Least-squares line through (x, log empirical complementary CDF), compared
/// against a reference decay rate.
struct TailFit {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_se = 0.0;
  double theta_star_ref = 0.0;
  double rel_error = 0.0;  // |(-slope) - theta*| / theta*
  long bins_used = 0;
  std::vector<double> xs;       // fitted bin centers
  std::vector<double> log_ccdf; // fitted ordinates
};

/// Fits the log-tail slope over [x_lo, x_hi] using only bins that retain at
/// least `min_bin_count` samples.
inline TailFit fit_tail_exponent(const StationaryEstimate& est, double x_lo, double x_hi,
                                 double theta_star_ref, long min_bin_count = 100) {
  if (!(x_lo < x_hi)) fail(errc::empty_tail, "empty fit range");
  TailFit fit;
  fit.x_lo = x_lo;
  fit.x_hi = x_hi;
  fit.theta_star_ref = theta_star_ref;
  for (std::size_t i = 0; i < est.counts.size(); ++i) {
    const double x = est.bin_center(i);
    if (x < x_lo || x > x_hi) continue;
    if (est.counts[i] < min_bin_count) continue;
    const double ccdf = est.ccdf_above(i);
    if (ccdf <= 0.0) continue;
    fit.xs.push_back(x);
    fit.log_ccdf.push_back(std::log(ccdf));
  }
  fit.bins_used = long(fit.xs.size());
  if (fit.bins_used < 5)
    fail(errc::empty_tail, "fewer than 5 usable bins in the fit range");
  const LineFit line = fit_line(fit.xs, fit.log_ccdf);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.slope_se = line.slope_se;
  if (theta_star_ref > 0.0)
    fit.rel_error = std::abs(-fit.slope - theta_star_ref) / theta_star_ref;
  return fit;
}

/// Default window policy: start at the 70th percentile of the positive mass,
/// stop at the last bin still holding `min_bin_count` samples. The bend near
/// zero is pre-asymptotic and the extreme bins are noise; both are excluded.
inline TailFit fit_tail_exponent_auto(const StationaryEstimate& est, double theta_star_ref,
                                      long min_bin_count = 100) {
  long positive = est.above_range;
  for (std::size_t i = 0; i < est.counts.size(); ++i)
    if (est.bin_lo(i) + est.bin_width > 0.0) positive += est.counts[i];
  if (positive <= 0) fail(errc::empty_tail, "no positive samples");

  const long target = static_cast<long>(0.70 * double(positive));
  long seen = 0;
  double x_lo = 0.0;
  for (std::size_t i = 0; i < est.counts.size(); ++i) {
    if (est.bin_lo(i) + est.bin_width <= 0.0) continue;
    seen += est.counts[i];
    if (seen >= target) {
      x_lo = est.bin_lo(i) + est.bin_width;
      break;
    }
  }
  double x_hi = x_lo;
  for (std::size_t i = 0; i < est.counts.size(); ++i)
    if (est.counts[i] >= min_bin_count) x_hi = est.bin_lo(i) + est.bin_width;
  return fit_tail_exponent(est, x_lo, x_hi, theta_star_ref, min_bin_count);
}

}  // namespace qed
