#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qed/limit_chain.hpp"
#include "qed/rng.hpp"
#include "qed/service.hpp"

using qed::GaussianDrivers;
using qed::LimitChainState;
using qed::ServiceDistribution;

TEST_CASE("mix vector of a deterministic law is identically zero") {
  const auto dist = ServiceDistribution::from_mass({{1, 1.0}});
  auto rng = qed::make_stream(21, 0);
  for (int i = 0; i < 100; ++i) {
    const auto v = qed::sample_mix_vector(dist, rng);
    REQUIRE(v.size() == 1);
    REQUIRE(v[0] == 0.0);
  }
}

TEST_CASE("mix vector sums to zero bit-exactly") {
  const auto dist = ServiceDistribution::from_mass({{1, 0.3}, {2, 0.3}, {3, 0.4}});
  auto rng = qed::make_stream(22, 0);
  for (int i = 0; i < 10000; ++i) {
    const auto v = qed::sample_mix_vector(dist, rng);
    double s = 0.0;
    for (double x : v) s += x;
    REQUIRE(s == 0.0);
  }
}

TEST_CASE("mix vector covariance matches mu Sigma") {
  const auto dist = ServiceDistribution::from_mass({{1, 0.5}, {2, 0.5}});
  const double mu = dist.mu();  // 2/3
  auto rng = qed::make_stream(23, 0);
  const long n = 1000000;
  double c11 = 0.0, c12 = 0.0, c22 = 0.0, kvar = 0.0;
  for (long i = 0; i < n; ++i) {
    const auto v = qed::sample_mix_vector(dist, rng);
    c11 += v[0] * v[0];
    c12 += v[0] * v[1];
    c22 += v[1] * v[1];
    const double kj = v[0] + 2.0 * v[1];
    kvar += kj * kj;
  }
  c11 /= double(n);
  c12 /= double(n);
  c22 /= double(n);
  kvar /= double(n);
  const double target = mu * 0.25;
  const double se = target * std::sqrt(2.0 / double(n));
  CHECK(std::abs(c11 - target) < 3.0 * se);
  CHECK(std::abs(c22 - target) < 3.0 * se);
  CHECK(std::abs(c12 + target) < 3.0 * se);
  // quadratic form along (1..K): variance mu sigma_s^2
  const double kv_target = mu * dist.sigma_s() * dist.sigma_s();
  CHECK(std::abs(kvar - kv_target) < 3.0 * kv_target * std::sqrt(2.0 / double(n)));
}

TEST_CASE("three-step trace against hand arithmetic") {
  // p = (1/2, 1/2), beta = 1; noises chosen by hand:
  //   step 1: a=0.8,  mix=( 0.3,-0.3) -> J=0.8, Q=0,   L=(0.70,0.10), Y=0.80
  //   step 2: a=1.6,  mix=(-0.2, 0.2) -> J=0.9, Q=0.7, L=(0.35,0.65), Y=1.70
  //   step 3: a=-0.5, mix=( 0.1,-0.1) -> J=0.2, Q=0,   L=(0.85,0.00), Y=0.85
  // window identity: V_2 = 1.7 = Y_2; V_3 = 0.5 and 0.5 + 0.5 (1.7-1)^+ = 0.85 = Y_3.
  const auto dist = ServiceDistribution::from_mass({{1, 0.5}, {2, 0.5}});
  const double beta = 1.0;
  auto s = qed::initial_limit_state(dist);

  qed::limit_step_with(s, beta, dist, 0.8, {0.3, -0.3});
  CHECK(s.q_hat == 0.0);
  CHECK(s.l_hat[0] == Catch::Approx(0.7).margin(1e-15));
  CHECK(s.l_hat[1] == Catch::Approx(0.1).margin(1e-15));

  qed::limit_step_with(s, beta, dist, 1.6, {-0.2, 0.2});
  CHECK(s.q_hat == Catch::Approx(0.7).margin(1e-15));
  CHECK(s.l_hat[0] == Catch::Approx(0.35).margin(1e-15));
  CHECK(s.l_hat[1] == Catch::Approx(0.65).margin(1e-15));
  CHECK(s.y_hat() == Catch::Approx(1.7).margin(1e-15));
  CHECK(s.v_hat() == Catch::Approx(1.7).margin(1e-15));

  qed::limit_step_with(s, beta, dist, -0.5, {0.1, -0.1});
  CHECK(s.q_hat == 0.0);
  CHECK(s.l_hat[0] == Catch::Approx(0.85).margin(1e-15));
  CHECK(s.l_hat[1] == Catch::Approx(0.0).margin(1e-15));
  CHECK(s.y_hat() == Catch::Approx(0.85).margin(1e-15));
  CHECK(s.v_hat() == Catch::Approx(0.5).margin(1e-15));
  CHECK(s.alpha_dot_zbar() == Catch::Approx(-0.35).margin(1e-15));

  // residual of Y_3 = V_3 + p_1 (Y_2 - beta)^+ + p_2 (Y_1 - beta)^+
  const double rhs = s.v_hat() + 0.5 * (1.7 - beta) + 0.0;
  CHECK(std::abs(s.y_hat() - rhs) < 1e-14);
}

TEST_CASE("worked entry-count examples") {
  const auto dist = ServiceDistribution::from_mass({{1, 0.5}, {2, 0.5}});
  SECTION("negative drive keeps the queue empty") {
    auto s = qed::initial_limit_state(dist);
    qed::limit_step_with(s, 1.0, dist, -0.5, {0.0, 0.0});
    CHECK(s.q_hat == 0.0);
    CHECK(s.l_hat[0] + s.l_hat[1] == Catch::Approx(-0.5));  // J = min(-0.5, 1) = -0.5
  }
  SECTION("queued work drains through the server-side cap") {
    auto s = qed::initial_limit_state(dist);
    s.q_hat = 2.0;
    s.l_hat = {0.0, 0.5};
    qed::limit_step_with(s, 1.0, dist, 0.0, {0.0, 0.0});
    // J = min(2+0, 1-0.5) = 0.5 and Q' = (2 + 0 + 0.5 - 1)^+ = 1.5
    CHECK(s.q_hat == Catch::Approx(1.5).margin(1e-15));
    const double j_applied = s.l_hat[1] / 0.5;  // L'_K = J p_K
    CHECK(j_applied == Catch::Approx(0.5).margin(1e-15));
  }
}

TEST_CASE("deterministic-service chain collapses to the reflected walk") {
  const auto dist = ServiceDistribution::from_mass({{1, 1.0}});
  const double beta = 0.7;
  GaussianDrivers drv_chain(dist, 1.0, 99);
  GaussianDrivers drv_walk(dist, 1.0, 99);  // same stream

  auto s = qed::initial_limit_state(dist);
  std::vector<double> scratch;
  double walk = 0.0;
  for (int t = 0; t < 5000; ++t) {
    qed::limit_step(s, beta, dist, drv_chain, scratch);
    walk = std::max(walk + drv_walk.sample_arrival_noise() - beta, 0.0);
    if (walk < 1e-12) walk = 0.0;
    REQUIRE(s.q_hat == walk);
  }
}

TEST_CASE("state invariants hold along a long run") {
  const auto dist = ServiceDistribution::from_mass({{1, 0.3}, {2, 0.3}, {3, 0.4}});
  const double beta = 0.5;
  GaussianDrivers drivers(dist, 1.0, 4711);
  auto s = qed::initial_limit_state(dist);
  std::vector<double> scratch;
  for (int t = 0; t < 100000; ++t) {
    qed::limit_step(s, beta, dist, drivers, scratch);
    double occupancy = 0.0;
    for (double v : s.l_hat) occupancy += v;
    REQUIRE(s.q_hat >= 0.0);
    REQUIRE(occupancy <= beta + 1e-9);
    REQUIRE(std::abs(s.q_hat * (occupancy - beta)) < 1e-9 * (1.0 + s.q_hat));
    const double y = s.y_hat();
    REQUIRE(std::abs(s.q_hat - std::max(y - beta, 0.0)) < 1e-9);
  }
}

TEST_CASE("recorded trajectories expose Y at or above V") {
  const auto tr = qed::run_limit_chain(ServiceDistribution::from_mass({{1, 0.5}, {2, 0.5}}), 1.0,
                                       1.0, 1000, 50000, 31);
  for (std::size_t t = 0; t < tr.size(); ++t) REQUIRE(tr.y[t] >= tr.v[t] - 1e-9);
}
