#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "normdyn/errors.hpp"
#include "normdyn/rng.hpp"

using namespace normdyn;

TEST_CASE("mix64 scrambles and separates nearby inputs") {
  CHECK(mix64(0) != 0);
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(mix64(i));
  CHECK(seen.size() == 1000);
}

TEST_CASE("replica_seed derives distinct streams from one master seed") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t r = 0; r < 500; ++r) seen.insert(replica_seed(123, r));
  CHECK(seen.size() == 500);
  CHECK(replica_seed(123, 7) == mix64(123 ^ 7));
  CHECK(replica_seed(123, 7) != replica_seed(124, 7));
}

TEST_CASE("identical seeds give identical streams") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.raw() == b.raw());
}

TEST_CASE("unit() lands in [0,1) with the right mean") {
  Rng rng(7);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // var of U(0,1) is 1/12; allow 3 sigma around 0.5
  const double sigma = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(sum / n - 0.5) < 3.0 * sigma);
}

TEST_CASE("uniform_index is in range and unbiased") {
  Rng rng(9);
  const int buckets = 7;
  const int n = 70000;
  std::vector<int> count(buckets, 0);
  for (int i = 0; i < n; ++i) {
    const int k = rng.uniform_index(buckets);
    REQUIRE(k >= 0);
    REQUIRE(k < buckets);
    ++count[k];
  }
  const double expect = double(n) / buckets;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / buckets));
  for (int k = 0; k < buckets; ++k) CHECK(std::abs(count[k] - expect) < 3.0 * sigma);
}

TEST_CASE("bernoulli tracks its probability") {
  Rng rng(11);
  const int n = 50000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
  const double sigma = std::sqrt(n * 0.3 * 0.7);
  CHECK(std::abs(hits - 0.3 * n) < 3.0 * sigma);
}

TEST_CASE("discrete distribution validates its weights") {
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<double>{}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<double>{0.5, -0.1, 0.6}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<double>{0.5, 0.4}), ValidationError);
  CHECK_THROWS_AS(DiscreteDistribution(std::vector<double>{0.7, 0.7}), ValidationError);
  CHECK_NOTHROW(DiscreteDistribution(std::vector<double>{0.5, 0.25, 0.25}));
}

TEST_CASE("discrete distribution exposes support and masses") {
  DiscreteDistribution d(std::vector<double>{0.5, 0.0, 0.5});
  CHECK(d.size() == 3);
  CHECK(d.prob(0) == doctest::Approx(0.5));
  CHECK(d.prob(1) == doctest::Approx(0.0));
  CHECK(d.in_support(0));
  CHECK_FALSE(d.in_support(1));
  CHECK(d.in_support(2));
}

TEST_CASE("discrete distribution sampling matches its masses") {
  DiscreteDistribution d(std::vector<double>{0.5, 0.25, 0.25});
  Rng rng(13);
  const int n = 40000;
  std::vector<int> count(3, 0);
  for (int i = 0; i < n; ++i) ++count[d.sample(rng)];
  const double probs[3] = {0.5, 0.25, 0.25};
  for (int k = 0; k < 3; ++k) {
    const double expect = n * probs[k];
    const double sigma = std::sqrt(n * probs[k] * (1.0 - probs[k]));
    CHECK(std::abs(count[k] - expect) < 3.0 * sigma);
  }
}

TEST_CASE("zero-mass outcomes are never sampled") {
  DiscreteDistribution d(std::vector<double>{0.0, 1.0});
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) CHECK(d.sample(rng) == 1);
}
