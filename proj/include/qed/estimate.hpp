#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qed/errors.hpp"
#include "qed/stats.hpp"

namespace qed {

/// Histogram, moments, atom-at-zero and batch-means interval of a stationary
/// scalar stream.
struct StationaryEstimate {
  double bin_width = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::vector<long> counts;
  long below_range = 0;
  long above_range = 0;
  double mean = 0.0;
  double variance = 0.0;
  double atom_at_zero = 0.0;
  double batch_ci = 0.0;  // 95% half-width on the mean
  long sample_count = 0;
  int batch_count = 0;

  long in_range() const {
    long s = 0;
    for (long c : counts) s += c;
    return s;
  }

  double bin_lo(std::size_t i) const { return x_lo + double(i) * bin_width; }
  double bin_center(std::size_t i) const { return x_lo + (double(i) + 0.5) * bin_width; }

  /// Empirical P[X > bin_hi(i)] from the histogram (out-of-range mass above
  /// the grid is counted in the tail).
  double ccdf_above(std::size_t i) const {
    long s = above_range;
    for (std::size_t j = i + 1; j < counts.size(); ++j) s += counts[j];
    return double(s) / double(sample_count);
  }
};

/// Mergeable accumulator behind estimate_stationary: fixed-geometry histogram
/// plus moment sums and per-batch partial sums. Merging is associative, and
/// folding replications in index order makes the result independent of the
/// worker schedule.
class SampleAccumulator {
 public:
  SampleAccumulator() = default;
  SampleAccumulator(double x_lo, double x_hi, double bin_width)
      : x_lo_(x_lo), x_hi_(x_hi), bin_width_(bin_width) {
    if (bin_width <= 0.0 || x_hi <= x_lo)
      fail(errc::too_few_samples, "invalid histogram geometry");
    const double span = (x_hi - x_lo) / bin_width;
    counts_.assign(static_cast<std::size_t>(std::ceil(span)), 0);
  }

  void add(double x) {
    ++n_;
    sum_ += x;
    sum2_ += x * x;
    if (x == 0.0) ++zeros_;
    if (x < x_lo_) {
      ++below_;
    } else {
      const std::size_t i = static_cast<std::size_t>((x - x_lo_) / bin_width_);
      if (i < counts_.size())
        ++counts_[i];
      else
        ++above_;
    }
  }

  void close_batch() {
    batch_sums_.push_back(sum_ - batch_consumed_);
    batch_sizes_.push_back(n_ - batch_n_consumed_);
    batch_consumed_ = sum_;
    batch_n_consumed_ = n_;
  }

  void merge(const SampleAccumulator& other) {
    if (counts_.empty()) {
      *this = other;
      return;
    }
    n_ += other.n_;
    sum_ += other.sum_;
    sum2_ += other.sum2_;
    zeros_ += other.zeros_;
    below_ += other.below_;
    above_ += other.above_;
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    batch_sums_.insert(batch_sums_.end(), other.batch_sums_.begin(), other.batch_sums_.end());
    batch_sizes_.insert(batch_sizes_.end(), other.batch_sizes_.begin(), other.batch_sizes_.end());
    batch_consumed_ = sum_;
    batch_n_consumed_ = n_;
  }

  long count() const { return n_; }

  StationaryEstimate finalize() const {
    StationaryEstimate e;
    e.bin_width = bin_width_;
    e.x_lo = x_lo_;
    e.x_hi = x_hi_;
    e.counts = counts_;
    e.below_range = below_;
    e.above_range = above_;
    e.sample_count = n_;
    if (n_ > 0) {
      e.mean = sum_ / double(n_);
      e.variance = std::max(0.0, sum2_ / double(n_) - e.mean * e.mean);
      e.atom_at_zero = double(zeros_) / double(n_);
    }
    e.batch_count = static_cast<int>(batch_sums_.size());
    if (e.batch_count >= 2) {
      std::vector<double> bm(batch_sums_.size());
      for (std::size_t i = 0; i < bm.size(); ++i)
        bm[i] = batch_sums_[i] / double(std::max<long>(batch_sizes_[i], 1));
      const Moments mm = moments(bm);
      const double sd =
          std::sqrt(mm.variance * double(bm.size()) / double(bm.size() - 1));
      e.batch_ci = t_quantile_975(e.batch_count - 1) * sd / std::sqrt(double(bm.size()));
    }
    return e;
  }

 private:
  double x_lo_ = 0.0, x_hi_ = 0.0, bin_width_ = 0.0;
  std::vector<long> counts_;
  long n_ = 0, zeros_ = 0, below_ = 0, above_ = 0;
  double sum_ = 0.0, sum2_ = 0.0;
  double batch_consumed_ = 0.0;
  long batch_n_consumed_ = 0;
  std::vector<double> batch_sums_;
  std::vector<long> batch_sizes_;
};

/// Deterministic fold of a sample stream into a StationaryEstimate. The first
/// `warmup` entries are dropped; the rest must supply at least 1000 samples
/// per batch.
inline StationaryEstimate estimate_stationary(const std::vector<double>& stream, long warmup,
                                              int batches, double bin_width) {
  if (warmup < 0 || warmup >= long(stream.size()))
    fail(errc::too_few_samples, "warmup swallows the whole stream");
  const long n = long(stream.size()) - warmup;
  if (batches < 20) fail(errc::too_few_samples, "need at least 20 batches");
  if (n < 1000L * batches) fail(errc::too_few_samples, "need at least 1000 samples per batch");

  double lo = 0.0, hi = bin_width;
  for (std::size_t i = static_cast<std::size_t>(warmup); i < stream.size(); ++i) {
    lo = std::min(lo, stream[i]);
    hi = std::max(hi, stream[i]);
  }
  hi = std::nextafter(hi + bin_width, std::numeric_limits<double>::infinity());

  SampleAccumulator acc(lo, hi, bin_width);
  const long per_batch = n / batches;
  long in_batch = 0;
  int closed = 0;
  for (std::size_t i = static_cast<std::size_t>(warmup); i < stream.size(); ++i) {
    acc.add(stream[i]);
    if (++in_batch == per_batch && closed + 1 < batches) {
      acc.close_batch();
      in_batch = 0;
      ++closed;
    }
  }
  acc.close_batch();
  return acc.finalize();
}

}  // namespace qed
