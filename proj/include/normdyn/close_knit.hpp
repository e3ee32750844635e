#pragma once

#include <optional>
#include <vector>

#include "normdyn/graph.hpp"

namespace normdyn {

// e(S', S): number of edges with one endpoint in S' and the other in S.
// Since S' is contained in S, these are exactly the edges inside S touching
// S'; an edge with both endpoints in S' is counted once.
int boundary_count(const WeightedGraph& g, const std::vector<int>& s_prime,
                   const std::vector<int>& s);

struct CloseKnitReport {
  double min_ratio;                // min over nonempty S' of e(S',S) / sum of degrees in S'
  std::vector<int> witness;        // an S' attaining the minimum
};

// Scans every nonempty subset of S. |S| is capped at 24 (capacity error
// beyond); S may not contain isolated vertices (the ratio degenerates).
CloseKnitReport close_knit_ratio(const WeightedGraph& g, const std::vector<int>& s);

enum class Tri { No, Yes, Indeterminate };

struct RkCloseKnitResult {
  Tri verdict;
  // For verdict Yes: one witness set per vertex (indexed by vertex).
  std::vector<std::vector<int>> witnesses;
  // Vertex that settled a No, if any.
  std::optional<int> failing_vertex;
  bool budget_exhausted;
};

// Is the graph (r,k)-close-knit: does every vertex lie in some k-set S with
// close_knit_ratio(S) >= r? Candidates are connected k-subsets grown from
// each vertex (smallest-id-first expansion). Each vertex gets an enumeration
// budget; exhausting it without a witness yields Indeterminate, which is
// distinct from a definitive No (complete enumeration, no witness).
RkCloseKnitResult is_rk_close_knit(const WeightedGraph& g, double r, int k,
                                   long long budget_per_vertex = 1000000);

}  // namespace normdyn
