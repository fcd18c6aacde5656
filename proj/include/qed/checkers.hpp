#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qed/derived.hpp"
#include "qed/errors.hpp"
#include "qed/limit_chain.hpp"
#include "qed/mat.hpp"
#include "qed/service.hpp"

namespace qed {

/// Max residual of the exact window identity
///   Y_t = V_t + sum_{i=1..K} p_i (Y_{t-i} - beta)^+
/// over the trajectory. The identity is pure algebra of the recursions, so
/// the residual should sit at floating-point noise; the contract is
/// residual <= 1e-9 (1 + max |Y|).
inline double y_identity_residual(const Trajectory& tr, const ServiceDistribution& dist) {
  const int K = tr.K;
  if (tr.size() <= static_cast<std::size_t>(K))
    fail(errc::window_too_short, "identity check needs more than K steps");
  const auto& p = dist.pmf();
  double worst = 0.0;
  for (std::size_t t = static_cast<std::size_t>(K); t < tr.size(); ++t) {
    double rhs = tr.v[t];
    for (int i = 1; i <= K; ++i) {
      const double excess = tr.y[t - static_cast<std::size_t>(i)] - tr.beta;
      rhs += p[static_cast<std::size_t>(i - 1)] * (excess > 0.0 ? excess : 0.0);
    }
    worst = std::max(worst, std::abs(tr.y[t] - rhs));
  }
  return worst;
}

inline double y_identity_scale(const Trajectory& tr) {
  double m = 0.0;
  for (double v : tr.y) m = std::max(m, std::abs(v));
  return 1.0 + m;
}

/// Checks the depth-k envelope of Y_t:
///  upper:  Y_t <= sum_{i=0..k} (V_{t-i})^+
///               + sum_{i=k+1..k+K} tail_{i-k} (Y_{t-i} - beta)^+
///  lower:  Y_t >= prod p_{i_j} Y_{t-s(k)} - sum_{j<k} (beta - V_{t-s(j)})^+
/// for the given index sequence (defaults to k copies of the smallest support
/// point). Returns the number of violations beyond 1e-9 relative slack.
inline long y_bounds_check(const Trajectory& tr, const ServiceDistribution& dist, int k,
                           std::vector<int> lower_indices = {}) {
  const int K = tr.K;
  if (tr.size() < static_cast<std::size_t>(k + K + 1))
    fail(errc::window_too_short, "bounds check needs at least k+K+1 steps");
  if (lower_indices.empty() && k > 0)
    lower_indices.assign(static_cast<std::size_t>(k), dist.min_support());

  const double slack = 1e-9 * y_identity_scale(tr);
  const auto& tail = dist.tail();
  long violations = 0;

  double lower_pk = 1.0;
  long lower_span = 0;
  std::vector<long> partial_spans;  // s(0), s(1), ..., s(k-1)
  partial_spans.push_back(0);
  for (std::size_t j = 0; j < lower_indices.size(); ++j) {
    lower_pk *= dist.pmf_at(lower_indices[j]);
    lower_span += lower_indices[j];
    if (j + 1 < lower_indices.size()) partial_spans.push_back(lower_span);
  }

  const std::size_t start = static_cast<std::size_t>(std::max<long>(k + K, lower_span));
  for (std::size_t t = start; t < tr.size(); ++t) {
    double upper = 0.0;
    for (int i = 0; i <= k; ++i) {
      const double v = tr.v[t - static_cast<std::size_t>(i)];
      upper += v > 0.0 ? v : 0.0;
    }
    for (int i = k + 1; i <= k + K; ++i) {
      const double excess = tr.y[t - static_cast<std::size_t>(i)] - tr.beta;
      upper += tail[static_cast<std::size_t>(i - k - 1)] * (excess > 0.0 ? excess : 0.0);
    }
    if (tr.y[t] > upper + slack) ++violations;

    if (k > 0) {
      double lower = lower_pk * tr.y[t - static_cast<std::size_t>(lower_span)];
      for (long s : partial_spans) {
        const double gap = tr.beta - tr.v[t - static_cast<std::size_t>(s)];
        lower -= gap > 0.0 ? gap : 0.0;
      }
      if (tr.y[t] < lower - slack) ++violations;
    }
  }
  return violations;
}

/// Verifies the k-step sandwich around the residual-service transition
/// structure:
///   -Vbar_{t+j} - beta B_j <= Ybar_{t+j} - (Ybar_t)^+ Gamma^j <= Vbar_{t+j}
/// componentwise, with B_j = (j, (j-1)^+, ..., (j-K+1)^+) and Vbar_{t+j} the
/// noise envelope accumulated from the anchor time: component c sums |V_i|
/// for i in [t-K+1, t+j-c]. Returns violations beyond 1e-9 slack.
inline long gamma_sandwich_check(const Trajectory& tr, const ServiceDistribution& dist, int j) {
  const int K = tr.K;
  if (tr.size() < static_cast<std::size_t>(j + 2 * K))
    fail(errc::window_too_short, "sandwich check needs at least j+2K steps");

  const Matrix gj = matrix_power(gamma_matrix(dist).gamma, static_cast<unsigned>(j));
  const double slack = 1e-9 * y_identity_scale(tr);
  long violations = 0;

  std::vector<double> ybar_plus(static_cast<std::size_t>(K));
  std::vector<double> b(static_cast<std::size_t>(K));
  for (int c = 0; c < K; ++c) b[static_cast<std::size_t>(c)] = std::max(j - c, 0);

  // prefix sums of |V| for the accumulated noise envelope
  std::vector<double> vabs(tr.size() + 1, 0.0);
  for (std::size_t i = 0; i < tr.size(); ++i) vabs[i + 1] = vabs[i] + std::abs(tr.v[i]);

  for (std::size_t t = static_cast<std::size_t>(K - 1); t + static_cast<std::size_t>(j) < tr.size();
       ++t) {
    const std::size_t tj = t + static_cast<std::size_t>(j);
    for (int c = 0; c < K; ++c) {
      const double y = tr.y[t - static_cast<std::size_t>(c)];
      ybar_plus[static_cast<std::size_t>(c)] = y > 0.0 ? y : 0.0;
    }
    // component c of Vbar_{t+j}: sum of |V_i| for i in [t-K+1, t+j-c]
    for (int c = 0; c < K; ++c) {
      const double vb = vabs[tj - static_cast<std::size_t>(c) + 1] -
                        vabs[t - static_cast<std::size_t>(K - 1)];
      double proj = 0.0;  // ((Ybar_t)^+ Gamma^j)_c
      for (int r = 0; r < K; ++r)
        proj += ybar_plus[static_cast<std::size_t>(r)] *
                gj(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      const double lhs = tr.y[tj - static_cast<std::size_t>(c)] - proj;
      if (lhs > vb + slack) ++violations;
      if (lhs < -vb - tr.beta * b[static_cast<std::size_t>(c)] - slack) ++violations;
    }
  }
  return violations;
}

}  // namespace qed
