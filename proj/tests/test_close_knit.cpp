#include "doctest.h"

#include <numeric>
#include <vector>

#include "normdyn/close_knit.hpp"
#include "normdyn/errors.hpp"
#include "normdyn/graph.hpp"

using namespace normdyn;

namespace {

// Independent reference: scan every nonempty subset S' of S directly.
double brute_min_ratio(const WeightedGraph& g, const std::vector<int>& s) {
  double best = 1e300;
  const std::size_t k = s.size();
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<char> in_prime(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<char> in_s(static_cast<std::size_t>(g.vertex_count()), 0);
    for (int v : s) in_s[static_cast<std::size_t>(v)] = 1;
    long long degsum = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((mask >> i) & 1u) {
        in_prime[static_cast<std::size_t>(s[i])] = 1;
        degsum += g.degree(s[i]);
      }
    }
    int e = 0;
    for (const WeightedEdge& edge : g.edges()) {
      const bool ue = in_prime[static_cast<std::size_t>(edge.u)];
      const bool ve = in_prime[static_cast<std::size_t>(edge.v)];
      const bool us = in_s[static_cast<std::size_t>(edge.u)];
      const bool vs = in_s[static_cast<std::size_t>(edge.v)];
      if ((ue && vs) || (ve && us)) ++e;
    }
    best = std::min(best, static_cast<double>(e) / static_cast<double>(degsum));
  }
  return best;
}

std::vector<int> iota_set(int k) {
  std::vector<int> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

}  // namespace

TEST_CASE("boundary_count counts internal edges once") {
  const WeightedGraph c4 = WeightedGraph::cycle(4);
  const std::vector<int> s{0, 1, 2};
  CHECK(boundary_count(c4, {1}, s) == 2);        // (0,1), (1,2)
  CHECK(boundary_count(c4, {0}, s) == 1);        // (0,1); (0,3) leaves S
  CHECK(boundary_count(c4, {0, 1}, s) == 2);     // (0,1) internal counted once, (1,2)
  CHECK(boundary_count(c4, {0, 1, 2}, s) == 2);
}

TEST_CASE("cycle segments hit the (k-1)/2k cohesion ratio") {
  const WeightedGraph c16 = WeightedGraph::cycle(16);
  for (int k = 2; k <= 8; ++k) {
    const std::vector<int> segment = iota_set(k);
    const double oracle = brute_min_ratio(c16, segment);
    CHECK(oracle == doctest::Approx((k - 1.0) / (2.0 * k)).epsilon(1e-12));
    const CloseKnitReport report = close_knit_ratio(c16, segment);
    CHECK(report.min_ratio == doctest::Approx(oracle).epsilon(1e-12));
    CHECK_FALSE(report.witness.empty());
  }
}

TEST_CASE("whole-graph ratios match brute force") {
  const WeightedGraph c8 = WeightedGraph::cycle(8);
  const CloseKnitReport rc = close_knit_ratio(c8, iota_set(8));
  CHECK(rc.min_ratio == doctest::Approx(brute_min_ratio(c8, iota_set(8))).epsilon(1e-12));
  CHECK(rc.min_ratio == doctest::Approx(0.5).epsilon(1e-12));

  const WeightedGraph k4 = WeightedGraph::complete(4);
  const CloseKnitReport rk = close_knit_ratio(k4, iota_set(4));
  CHECK(rk.min_ratio == doctest::Approx(brute_min_ratio(k4, iota_set(4))).epsilon(1e-12));
  CHECK(rk.min_ratio == doctest::Approx(0.5).epsilon(1e-12));

  const WeightedGraph grid = WeightedGraph::grid(3, 3);
  const std::vector<int> corner{0, 1, 3, 4};  // 2x2 block
  CHECK(close_knit_ratio(grid, corner).min_ratio ==
        doctest::Approx(brute_min_ratio(grid, corner)).epsilon(1e-12));
}

TEST_CASE("reported witness attains the reported ratio") {
  const WeightedGraph c16 = WeightedGraph::cycle(16);
  const std::vector<int> segment = iota_set(5);
  const CloseKnitReport report = close_knit_ratio(c16, segment);
  long long degsum = 0;
  for (int v : report.witness) degsum += c16.degree(v);
  const double witness_ratio =
      static_cast<double>(boundary_count(c16, report.witness, segment)) /
      static_cast<double>(degsum);
  CHECK(witness_ratio == doctest::Approx(report.min_ratio).epsilon(1e-12));
}

TEST_CASE("close_knit_ratio rejects degenerate input") {
  WeightedGraph g(3);
  g.add_edge(0, 1);
  CHECK_THROWS_AS(close_knit_ratio(g, {0, 2}), ValidationError);  // vertex 2 isolated
  CHECK_THROWS_AS(close_knit_ratio(g, {}), ValidationError);
  const WeightedGraph big = WeightedGraph::cycle(30);
  CHECK_THROWS_AS(close_knit_ratio(big, iota_set(25)), CapacityError);
}

TEST_CASE("cycles are (r,k)-close-knit below the segment ratio and not above") {
  const WeightedGraph c8 = WeightedGraph::cycle(8);
  const RkCloseKnitResult yes = is_rk_close_knit(c8, 0.3, 3);
  CHECK(yes.verdict == Tri::Yes);
  CHECK_FALSE(yes.budget_exhausted);
  REQUIRE(yes.witnesses.size() == 8);
  for (int v = 0; v < 8; ++v) {
    const std::vector<int>& w = yes.witnesses[static_cast<std::size_t>(v)];
    REQUIRE(w.size() == 3);
    bool contains = false;
    for (int u : w) contains |= (u == v);
    CHECK(contains);
    CHECK(close_knit_ratio(c8, w).min_ratio >= 0.3);
  }

  // 3-segments of a cycle reach exactly 1/3 < 0.4, and no other 3-set does
  // better, so 0.4 gets a definitive No.
  const RkCloseKnitResult no = is_rk_close_knit(c8, 0.4, 3);
  CHECK(no.verdict == Tri::No);
  CHECK_FALSE(no.budget_exhausted);
  CHECK(no.failing_vertex.has_value());
}

TEST_CASE("paths are close-knit via end segments") {
  const WeightedGraph l5 = WeightedGraph::line(5);
  const RkCloseKnitResult res = is_rk_close_knit(l5, 0.35, 3);
  CHECK(res.verdict == Tri::Yes);
}

TEST_CASE("k larger than the graph is a definitive No") {
  const WeightedGraph c8 = WeightedGraph::cycle(8);
  const RkCloseKnitResult res = is_rk_close_knit(c8, 0.3, 9);
  CHECK(res.verdict == Tri::No);
}

TEST_CASE("isolated vertices can never be covered") {
  WeightedGraph g(3);
  g.add_edge(0, 1);
  const RkCloseKnitResult res = is_rk_close_knit(g, 0.25, 2);
  CHECK(res.verdict == Tri::No);
  CHECK(res.failing_vertex.has_value());
  CHECK(*res.failing_vertex == 2);
}

TEST_CASE("a starved budget reports indeterminate rather than guessing") {
  const WeightedGraph grid = WeightedGraph::grid(5, 5);
  const RkCloseKnitResult res = is_rk_close_knit(grid, 0.45, 12, 10);
  CHECK(res.verdict == Tri::Indeterminate);
  CHECK(res.budget_exhausted);
}
