#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qed/errors.hpp"
#include "qed/stats.hpp"

namespace qed {

/// Stationary law of the reflected Gaussian walk
///   Q_{t+1} = (Q_t + A - beta)^+,  A ~ N(0, c_a^2),
/// the deterministic-service (K = 1) special case of the limiting chain.
/// Computed by iterating the distributional fixed point of the CDF on a grid
/// until the sup-change falls below 1e-10. Carries an atom at zero plus a
/// piecewise-linear continuous part.
struct ReflectedWalkCdf {
  double h = 0.0;
  double x_max = 0.0;
  std::vector<double> grid;  // 0, h, 2h, ..., x_max
  std::vector<double> cdf;   // F(grid[i]); F(0) is the atom at zero
  int sweeps = 0;

  double atom() const { return cdf.empty() ? 0.0 : cdf.front(); }

  double operator()(double x) const {
    if (x < 0.0) return 0.0;
    if (x >= x_max) return 1.0;
    const double pos = x / h;
    const std::size_t i = static_cast<std::size_t>(pos);
    const double w = pos - double(i);
    return cdf[i] * (1.0 - w) + cdf[i + 1] * w;
  }
};

inline ReflectedWalkCdf reflected_walk_oracle(double beta, double ca, double x_max, double h) {
  if (h > ca / 20.0)
    fail(errc::grid_too_coarse, "grid step must be at most c_a/20");
  if (x_max <= h) fail(errc::grid_too_coarse, "x_max too small for the grid step");

  ReflectedWalkCdf out;
  out.h = h;
  const std::size_t m = static_cast<std::size_t>(std::ceil(x_max / h));
  out.x_max = double(m) * h;
  out.grid.resize(m + 1);
  for (std::size_t i = 0; i <= m; ++i) out.grid[i] = double(i) * h;

  // start from everything at zero
  std::vector<double> f(m + 1, 1.0);
  std::vector<double> next(m + 1, 0.0);
  const double inv_ca = 1.0 / ca;

  // Step kernel: P[(q + A - beta)^+ <= x] = Phi((x - q + beta)/ca).
  // Trapezoidal mass placement: atom at zero plus half-masses at cell edges.
  for (int sweep = 0; sweep < 100000; ++sweep) {
    for (std::size_t i = 0; i <= m; ++i) {
      const double x = out.grid[i];
      double acc = f[0] * normal_cdf((x + beta) * inv_ca);
      for (std::size_t j = 1; j <= m; ++j) {
        const double mass = f[j] - f[j - 1];
        if (mass <= 0.0) continue;
        acc += 0.5 * mass *
               (normal_cdf((x - out.grid[j - 1] + beta) * inv_ca) +
                normal_cdf((x - out.grid[j] + beta) * inv_ca));
      }
      next[i] = acc;
    }
    // mass escaping past x_max is pinned at the top node
    const double top = next[m];
    if (top > 0.0 && top < 1.0)
      for (std::size_t i = 0; i <= m; ++i) next[i] /= top;
    next[m] = 1.0;

    double change = 0.0;
    for (std::size_t i = 0; i <= m; ++i) change = std::max(change, std::abs(next[i] - f[i]));
    f.swap(next);
    ++out.sweeps;
    if (change < 1e-10) break;
  }

  // monotone cleanup of floating-point dust
  for (std::size_t i = 1; i <= m; ++i) f[i] = std::max(f[i], f[i - 1]);
  out.cdf = std::move(f);
  return out;
}

}  // namespace qed
