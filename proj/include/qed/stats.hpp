#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qed/errors.hpp"

namespace qed {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

struct Moments {
  long count = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance of the sample
};

template <class It>
Moments moments(It first, It last) {
  Moments m;
  double sum = 0.0;
  for (It it = first; it != last; ++it) {
    sum += *it;
    ++m.count;
  }
  if (m.count == 0) return m;
  m.mean = sum / double(m.count);
  double ss = 0.0;
  for (It it = first; it != last; ++it) {
    const double d = *it - m.mean;
    ss += d * d;
  }
  m.variance = ss / double(m.count);
  return m;
}

inline Moments moments(const std::vector<double>& v) { return moments(v.begin(), v.end()); }

/// Upper 97.5% Student-t quantile; exact table for small df, Cornish-Fisher
/// correction beyond.
inline double t_quantile_975(int df) {
  static const double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                 2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                 2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                 2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df <= 0) return 12.706;
  if (df <= 30) return table[df - 1];
  const double z = 1.959963985;
  return z + (z * z * z + z) / (4.0 * double(df));
}

struct BatchMeansResult {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // 95% interval on the mean
  int batches = 0;
  long used = 0;  // samples consumed (truncated to a multiple of the batch size)
};

/// Batch-means confidence interval for the mean of an autocorrelated stream.
template <class It>
BatchMeansResult batch_means(It first, It last, int batches) {
  const long n = static_cast<long>(std::distance(first, last));
  BatchMeansResult r;
  if (batches < 2 || n < batches) return r;
  const long bs = n / batches;
  r.batches = batches;
  r.used = bs * batches;
  std::vector<double> bm(static_cast<std::size_t>(batches), 0.0);
  It it = first;
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (long i = 0; i < bs; ++i, ++it) s += *it;
    bm[static_cast<std::size_t>(b)] = s / double(bs);
  }
  const Moments m = moments(bm);
  r.mean = m.mean;
  const double sd = std::sqrt(m.variance * double(batches) / double(batches - 1));
  r.ci_halfwidth = t_quantile_975(batches - 1) * sd / std::sqrt(double(batches));
  return r;
}

inline BatchMeansResult batch_means(const std::vector<double>& v, int batches) {
  return batch_means(v.begin(), v.end(), batches);
}

/// Two-sample Kolmogorov-Smirnov distance, valid in the presence of ties
/// (atoms). Inputs need not be sorted.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(errc::too_few_samples, "ks_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  return d;
}

/// Conservative standard error of the two-sample KS distance.
inline double ks_standard_error(std::size_t m, std::size_t n) {
  return 0.5 * std::sqrt(1.0 / double(m) + 1.0 / double(n));
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_se = 0.0;
  long points = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  assert(x.size() == y.size());
  LineFit f;
  f.points = static_cast<long>(x.size());
  if (x.size() < 2) return f;
  const Moments mx = moments(x), my = moments(y);
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx.mean) * (y[i] - my.mean);
  const double sxx = mx.variance * double(x.size());
  if (sxx <= 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my.mean - f.slope * mx.mean;
  double ss_res = 0.0;
  const double ss_tot = my.variance * double(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  if (x.size() > 2) f.slope_se = std::sqrt(ss_res / double(x.size() - 2) / sxx);
  return f;
}

}  // namespace qed
