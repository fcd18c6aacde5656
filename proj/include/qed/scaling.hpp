#pragma once

#include <cmath>
#include <string>

#include "qed/errors.hpp"
#include "qed/service.hpp"

namespace qed {

/// Square-root spare-capacity scaling of the n-server system. The arrival
/// rate is pinned to lambda_n = mu (n - beta sqrt(n)), so the realized
/// spare-capacity parameter beta_n = (n - lambda_n/mu)/sqrt(n) equals beta
/// with no slack and experiments are comparable across n.
struct QedScaling {
  int n = 1;
  double beta = 0.0;
  double lambda_n = 0.0;
  double rho_n = 0.0;
  double beta_n = 0.0;

  double sqrt_n() const { return std::sqrt(double(n)); }
};

inline QedScaling qed_scaling(int n, double beta, const ServiceDistribution& dist) {
  if (n < 1) fail(errc::overloaded, "server count must be positive");
  QedScaling s;
  s.n = n;
  s.beta = beta;
  const double mu = dist.mu();
  const double root = std::sqrt(double(n));
  s.lambda_n = mu * (double(n) - beta * root);
  if (s.lambda_n <= 0.0)
    fail(errc::overloaded, "beta sqrt(n) >= n at n=" + std::to_string(n));
  s.rho_n = s.lambda_n / (double(n) * mu);
  s.beta_n = beta;
  return s;
}

/// Critical exponent 2 beta / (c_a^2 + c_s^2) of the scaled stationary
/// queue-length tail.
inline double theta_star(double beta, double ca, double cs) {
  const double noise = ca * ca + cs * cs;
  if (noise <= 0.0)
    fail(errc::degenerate_noise, "c_a = c_s = 0 leaves no Gaussian tail to measure");
  return 2.0 * beta / noise;
}

/// Critical exponent of the geometric Lyapunov drift in the exponent variable
/// theta of exp(theta tail_p . Ybar + theta alpha . Zbar): the one-step ratio
/// outside the exception set equals exp(-theta beta + theta^2 (c_a^2+c_s^2)/(2 mu)),
/// which is below one exactly for theta < mu theta_star.
inline double lyapunov_critical_theta(double beta, double ca, const ServiceDistribution& dist) {
  return dist.mu() * theta_star(beta, ca, dist.cs());
}

}  // namespace qed
