#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "qed/estimate.hpp"
#include "qed/mgf.hpp"
#include "qed/rng.hpp"
#include "qed/tail_fit.hpp"

namespace {

std::vector<double> exponential_samples(double rate, long n, std::uint64_t seed) {
  auto rng = qed::make_stream(seed, 0);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (auto& x : out) x = -std::log1p(-qed::uniform01(rng)) / rate;
  return out;
}

}  // namespace

TEST_CASE("tail fit recovers a known exponential rate") {
  const auto samples = exponential_samples(2.0, 1000000, 61);
  const auto est = qed::estimate_stationary(samples, 0, 32, 0.02);
  const auto fit = qed::fit_tail_exponent(est, 1.0, 3.0, 2.0);
  CHECK(-fit.slope == Catch::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(-fit.slope - 2.0) < 2.0 * fit.slope_se + 0.02);
  CHECK(fit.r_squared > 0.99);
  CHECK(fit.rel_error < 0.05);
  CHECK(fit.bins_used >= 5);
}

TEST_CASE("auto fit window tracks the tail") {
  const auto samples = exponential_samples(1.0, 500000, 62);
  const auto est = qed::estimate_stationary(samples, 0, 32, 0.05);
  const auto fit = qed::fit_tail_exponent_auto(est, 1.0);
  CHECK(-fit.slope == Catch::Approx(1.0).epsilon(0.08));
  CHECK(fit.x_lo > 0.5);  // beyond the 70th percentile of Exp(1)
}

TEST_CASE("empty tail is reported") {
  std::vector<double> flat(50000, 0.5);
  const auto est = qed::estimate_stationary(flat, 0, 20, 0.1);
  CHECK_THROWS_MATCHES(qed::fit_tail_exponent(est, 3.0, 9.0, 1.0), qed::Error,
                       Catch::Matchers::Predicate<qed::Error>([](const qed::Error& e) {
                         return e.code() == qed::errc::empty_tail;
                       }));
}

TEST_CASE("empirical mgf") {
  const auto samples = exponential_samples(1.0, 200000, 63);

  SECTION("theta zero is exactly one") {
    const auto pts = qed::empirical_mgf(samples, {0.0});
    CHECK(pts[0].estimate == 1.0);
    CHECK_FALSE(pts[0].unreliable);
  }

  SECTION("finite region matches the closed form") {
    const auto pts = qed::empirical_mgf(samples, {0.5});
    // E exp(theta X) = 1/(1-theta) = 2 for Exp(1)
    CHECK(std::abs(pts[0].estimate - 2.0) < 3.0 * pts[0].se);
    CHECK_FALSE(pts[0].unreliable);
  }

  SECTION("divergent region is flagged") {
    const auto pts = qed::empirical_mgf(samples, {1.3});
    CHECK(pts[0].unreliable);
    CHECK(pts[0].top_share > 0.5);
  }

  SECTION("too few samples") {
    std::vector<double> tiny(100, 1.0);
    CHECK_THROWS_AS(qed::empirical_mgf(tiny, {0.5}), qed::Error);
  }
}
