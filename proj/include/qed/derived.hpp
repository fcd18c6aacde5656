#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qed/errors.hpp"
#include "qed/mat.hpp"
#include "qed/scaling.hpp"
#include "qed/service.hpp"

namespace qed {

/// Covariance template of the service-mix noise: Sigma_ii = (1-p_i)p_i and
/// Sigma_ij = -p_i p_j off the diagonal. The limiting mix vector has
/// covariance mu * Sigma; the mu factor is applied at sampling time.
inline Matrix covariance_sigma(const ServiceDistribution& dist) {
  const auto& p = dist.pmf();
  const std::size_t k = p.size();
  Matrix s(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      s(i, j) = (i == j) ? (1.0 - p[i]) * p[i] : -p[i] * p[j];
  return s;
}

/// Weight vector alpha in R^{K^2}: block k holds (j-k)^+ for j = 1..K.
inline std::vector<double> alpha_vector(int K) {
  std::vector<double> a;
  a.reserve(static_cast<std::size_t>(K) * static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k)
    for (int j = 1; j <= K; ++j) a.push_back(j > k ? double(j - k) : 0.0);
  return a;
}

struct GammaResult {
  Matrix gamma;             // K x K; transpose is a stochastic matrix
  std::vector<double> psi;  // unique stationary row vector of gamma^T
};

/// Residual-service transition structure: Gamma^T has first row p and the
/// shifted identity below, so powers of Gamma collapse to rank one with
/// common column psi. Requires an aperiodic support: for K > 1 there must be
/// two relatively prime support points.
inline GammaResult gamma_matrix(const ServiceDistribution& dist) {
  const int K = dist.max_service();
  if (K > 1) {
    bool coprime_pair = false;
    for (int i = 1; i <= K && !coprime_pair; ++i) {
      if (dist.pmf_at(i) <= 0.0) continue;
      for (int j = i + 1; j <= K; ++j)
        if (dist.pmf_at(j) > 0.0 && std::gcd(i, j) == 1) {
          coprime_pair = true;
          break;
        }
    }
    if (!coprime_pair)
      fail(errc::not_aperiodic, "support has no relatively prime pair; powers do not converge");
  }

  GammaResult r;
  r.gamma = Matrix(static_cast<std::size_t>(K), static_cast<std::size_t>(K));
  for (int i = 1; i <= K; ++i) {
    r.gamma(static_cast<std::size_t>(i - 1), 0) = dist.pmf_at(i);
    if (i >= 2) r.gamma(static_cast<std::size_t>(i - 2), static_cast<std::size_t>(i - 1)) = 1.0;
  }

  // psi solves psi Gamma^T = psi with sum(psi) = 1: least squares on the
  // (K+1)-equation stationary system via normal equations.
  const std::size_t n = static_cast<std::size_t>(K);
  Matrix a(n + 1, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = r.gamma(i, j) - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) a(n, j) = 1.0;

  Matrix ata(n, n);
  std::vector<double> atb(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t row = 0; row <= n; ++row) s += a(row, i) * a(row, j);
      ata(i, j) = s;
    }
  for (std::size_t i = 0; i < n; ++i) atb[i] = a(n, i);  // b = e_{K+1}

  r.psi = solve_linear(ata, atb);

  double residual = 0.0, total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double row = 0.0;  // (psi Gamma^T)_j = sum_i psi_i Gamma_{j,i}
    for (std::size_t i = 0; i < n; ++i) row += r.psi[i] * r.gamma(j, i);
    residual = std::max(residual, std::abs(row - r.psi[j]));
    total += r.psi[j];
  }
  residual = std::max(residual, std::abs(total - 1.0));
  if (residual > 1e-12)
    throw std::runtime_error("gamma_matrix: stationary solve residual " + std::to_string(residual));
  return r;
}

struct DerivedConstants {
  double theta_star = 0.0;
  Matrix sigma;
  std::vector<double> alpha;
  Matrix gamma;
  std::vector<double> psi;
};

inline DerivedConstants derive_constants(const ServiceDistribution& dist, double beta, double ca) {
  DerivedConstants d;
  d.theta_star = theta_star(beta, ca, dist.cs());
  d.sigma = covariance_sigma(dist);
  d.alpha = alpha_vector(dist.max_service());
  GammaResult g = gamma_matrix(dist);
  d.gamma = std::move(g.gamma);
  d.psi = std::move(g.psi);
  return d;
}

}  // namespace qed
