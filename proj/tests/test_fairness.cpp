#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "normdyn/errors.hpp"
#include "normdyn/fairness.hpp"

using namespace normdyn;

TEST_CASE("round segmentation finds minimal covering segments") {
  const std::vector<int> trace{0, 1, 1, 2, 1, 0, 2};
  const RoundSegmentation seg = segment_rounds(trace, 3);
  CHECK(seg.lengths == std::vector<std::uint64_t>{4, 3});
  CHECK(seg.trailing == 0);

  const std::vector<int> partial{0, 1};
  const RoundSegmentation incomplete = segment_rounds(partial, 3);
  CHECK(incomplete.lengths.empty());
  CHECK(incomplete.trailing == 2);

  const std::vector<int> with_tail{0, 1, 2, 0};
  const RoundSegmentation tail = segment_rounds(with_tail, 3);
  CHECK(tail.lengths == std::vector<std::uint64_t>{3});
  CHECK(tail.trailing == 1);

  CHECK_THROWS_AS(segment_rounds(trace, 0), ValidationError);
  CHECK_THROWS_AS(segment_rounds(std::vector<int>{0, 5}, 3), ValidationError);
}

TEST_CASE("window fairness checks every b(n-1)+1 slice") {
  const std::vector<int> rr{0, 1, 2, 0, 1, 2, 0, 1, 2};
  CHECK(b_fair_check(rr, 3, 1));

  const std::vector<int> stutter{0, 0, 1, 2};
  CHECK_FALSE(b_fair_check(stutter, 3, 1));  // window (0,0,1) misses 2
  CHECK(b_fair_check(stutter, 3, 2));        // trace shorter than the window

  CHECK_THROWS_AS(b_fair_check(rr, 3, 0), ValidationError);
  CHECK_THROWS_AS(b_fair_check(std::vector<int>{0, 7, 1}, 3, 1), ValidationError);
}

TEST_CASE("uniform random rounds behave like coupon collection") {
  const int n = 16;
  const int rounds = 300;
  const WeightedGraph g = WeightedGraph::complete(n);
  const FairnessReport report =
      fairness_whp_estimate(g, PayoffMatrix(3, 2, 0, 0), ModelParams::from_beta(1.0),
                            RandomScheduler{}, n * std::log(n), rounds, 61);
  REQUIRE(report.round_lengths.size() == rounds);

  double mean_expected = 0.0, var_expected = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double p = static_cast<double>(n - i + 1) / n;
    mean_expected += 1.0 / p;
    var_expected += (1.0 - p) / (p * p);
  }
  double mean = 0.0;
  for (std::uint64_t l : report.round_lengths) mean += static_cast<double>(l);
  mean /= rounds;
  CHECK(std::abs(mean - mean_expected) < 3.0 * std::sqrt(var_expected / rounds));

  // Tail estimates shrink with the threshold; at 8x the n*log(n) scale the
  // coupon tail is astronomically small.
  CHECK(report.ghat[0] >= report.ghat[1]);
  CHECK(report.ghat[1] >= report.ghat[2]);
  CHECK(report.ghat[2] >= report.ghat[3]);
  CHECK(report.ghat[3] == 0.0);

  // Uniform scheduling is 1-individually fair; the min-frequency estimate
  // sits just under 1.
  CHECK(report.c_hat > 0.8);
  CHECK(report.c_hat <= 1.0);
  CHECK(report.total_steps >= static_cast<std::uint64_t>(rounds) * n);
  CHECK(report.hammer_cap_hits == 0);
}

TEST_CASE("round-robin rounds are exactly n long") {
  const int n = 6;
  const WeightedGraph g = WeightedGraph::cycle(n);
  const FairnessReport report =
      fairness_whp_estimate(g, PayoffMatrix(3, 2, 0, 0), ModelParams::from_beta(1.0),
                            round_robin(n), n, 120, 67);
  REQUIRE(report.round_lengths.size() == 120);
  for (std::uint64_t l : report.round_lengths) CHECK(l == static_cast<std::uint64_t>(n));
  CHECK(report.trailing == 0);
  CHECK(report.total_steps == static_cast<std::uint64_t>(120 * n));
  CHECK(report.c_hat == 1.0);
  for (double gh : report.ghat) CHECK(gh == 0.0);
}

TEST_CASE("a compliant adversary round is one pass over the permutation") {
  // At infinite beta from all-B every hammered vertex complies immediately,
  // so each adversary round is exactly n steps.
  const int n = 8;
  const WeightedGraph g = WeightedGraph::cycle(n);
  const FairnessReport report = fairness_whp_estimate(
      g, PayoffMatrix(3, 2, 0, 0),
      ModelParams::from_beta(std::numeric_limits<double>::infinity()),
      AdversarialScheduler{0.5, {0, 1, 2, 3, 4, 5, 6, 7}, 10}, n, 150, 71);
  REQUIRE(report.round_lengths.size() == 150);
  for (std::uint64_t l : report.round_lengths) CHECK(l == static_cast<std::uint64_t>(n));
  CHECK(report.c_hat == 1.0);  // by construction for adaptive scheduling
  CHECK(report.hammer_cap_hits == 0);
}

TEST_CASE("fairness estimation rejects tiny round counts and exhausted budgets") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  CHECK_THROWS_AS(fairness_whp_estimate(g, PayoffMatrix(3, 2, 0, 0),
                                        ModelParams::from_beta(1.0), RandomScheduler{}, 4.0, 99,
                                        1),
                  ValidationError);
  CHECK_THROWS_AS(fairness_whp_estimate(g, PayoffMatrix(3, 2, 0, 0),
                                        ModelParams::from_beta(1.0), RandomScheduler{}, 4.0, 100,
                                        1, 50),
                  CapacityError);
}
