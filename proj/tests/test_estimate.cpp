#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "qed/estimate.hpp"
#include "qed/rng.hpp"

using qed::SampleAccumulator;
using qed::StationaryEstimate;

TEST_CASE("constant stream") {
  std::vector<double> stream(64000, 2.5);
  const auto est = qed::estimate_stationary(stream, 0, 32, 0.1);
  CHECK(est.mean == Catch::Approx(2.5));
  CHECK(est.variance == Catch::Approx(0.0).margin(1e-12));
  CHECK(est.batch_ci == Catch::Approx(0.0).margin(1e-12));
  CHECK(est.atom_at_zero == 0.0);
  CHECK(est.batch_count == 32);
  CHECK(est.in_range() + est.below_range + est.above_range == est.sample_count);
}

TEST_CASE("standard normal stream") {
  auto rng = qed::make_stream(51, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> stream(1000000);
  for (auto& x : stream) x = normal(rng);
  const auto est = qed::estimate_stationary(stream, 0, 32, 0.05);
  CHECK(std::abs(est.mean) < est.batch_ci);  // CI covers the true mean
  CHECK(est.batch_ci == Catch::Approx(1.96 / std::sqrt(1e6)).epsilon(0.35));
  CHECK(est.variance == Catch::Approx(1.0).epsilon(0.01));
  CHECK(est.in_range() + est.below_range + est.above_range == est.sample_count);
}

TEST_CASE("warmup is dropped and atoms are counted") {
  std::vector<double> stream(50000, 7.0);          // warmup junk
  stream.resize(50000 + 40000, 0.0);               // all-zero tail
  const auto est = qed::estimate_stationary(stream, 50000, 20, 0.5);
  CHECK(est.sample_count == 40000);
  CHECK(est.atom_at_zero == 1.0);
  CHECK(est.mean == 0.0);
}

TEST_CASE("too few samples") {
  std::vector<double> tiny(5000, 1.0);
  CHECK_THROWS_MATCHES(qed::estimate_stationary(tiny, 0, 32, 0.1), qed::Error,
                       Catch::Matchers::Predicate<qed::Error>([](const qed::Error& e) {
                         return e.code() == qed::errc::too_few_samples;
                       }));
  CHECK_THROWS_AS(qed::estimate_stationary(tiny, 5000, 2, 0.1), qed::Error);
}

TEST_CASE("estimation is a pure fold") {
  auto rng = qed::make_stream(52, 0);
  std::vector<double> stream(70000);
  for (auto& x : stream) x = qed::uniform01(rng);
  const auto a = qed::estimate_stationary(stream, 1000, 24, 0.01);
  const auto b = qed::estimate_stationary(stream, 1000, 24, 0.01);
  CHECK(a.mean == b.mean);
  CHECK(a.batch_ci == b.batch_ci);
  CHECK(a.counts == b.counts);
}

TEST_CASE("accumulator merge matches a single pass") {
  auto rng = qed::make_stream(53, 0);
  std::vector<double> stream(30000);
  for (auto& x : stream) x = 3.0 * qed::uniform01(rng);

  SampleAccumulator whole(0.0, 4.0, 0.1);
  for (double x : stream) whole.add(x);
  whole.close_batch();

  SampleAccumulator left(0.0, 4.0, 0.1), right(0.0, 4.0, 0.1);
  for (std::size_t i = 0; i < stream.size() / 2; ++i) left.add(stream[i]);
  left.close_batch();
  for (std::size_t i = stream.size() / 2; i < stream.size(); ++i) right.add(stream[i]);
  right.close_batch();
  left.merge(right);

  const auto a = whole.finalize();
  const auto b = left.finalize();
  CHECK(a.counts == b.counts);
  CHECK(a.mean == Catch::Approx(b.mean).epsilon(1e-12));
  CHECK(b.batch_count == 2);
}
