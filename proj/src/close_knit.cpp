#include "normdyn/close_knit.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

constexpr int kMaxSubsetSet = 24;

std::vector<char> membership(const WeightedGraph& g, const std::vector<int>& s,
                             const char* what) {
  std::vector<char> in(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v : s) {
    if (v < 0 || v >= g.vertex_count())
      throw ValidationError(std::string(what) + ": vertex out of range");
    if (in[static_cast<std::size_t>(v)])
      throw ValidationError(std::string(what) + ": repeated vertex");
    in[static_cast<std::size_t>(v)] = 1;
  }
  return in;
}

// Ratio minimum over nonempty submasks of full_mask, where adj[i] holds the
// within-set adjacency of position i and deg[i] the full-graph degree.
// Returns (min ratio, argmin mask). Subset DP over covered-edge counts:
// cover(m) = cover(m \ lowbit) + |N(lowbit) inside set \ (m \ lowbit)|.
std::pair<double, std::uint32_t> min_ratio_scan(const std::vector<std::uint32_t>& adj,
                                                const std::vector<int>& deg) {
  const int s = static_cast<int>(adj.size());
  const std::size_t total = std::size_t{1} << s;
  std::vector<std::uint32_t> cover(total), degsum(total);
  cover[0] = 0;
  degsum[0] = 0;
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  for (std::size_t m = 1; m < total; ++m) {
    const int v = std::countr_zero(m);
    const std::size_t rest = m & (m - 1);
    cover[m] = cover[rest] + static_cast<std::uint32_t>(
                                 std::popcount(adj[static_cast<std::size_t>(v)] &
                                               ~static_cast<std::uint32_t>(rest)));
    degsum[m] = degsum[rest] + static_cast<std::uint32_t>(deg[static_cast<std::size_t>(v)]);
    const double ratio = static_cast<double>(cover[m]) / static_cast<double>(degsum[m]);
    if (ratio < best) {
      best = ratio;
      best_mask = static_cast<std::uint32_t>(m);
    }
  }
  return {best, best_mask};
}

struct SetView {
  std::vector<int> verts;           // position -> vertex id
  std::vector<std::uint32_t> adj;   // within-set adjacency masks
  std::vector<int> deg;             // full-graph degrees
};

SetView make_view(const WeightedGraph& g, const std::vector<int>& s) {
  SetView view;
  view.verts = s;
  std::vector<int> pos(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < s.size(); ++i) pos[static_cast<std::size_t>(s[i])] = static_cast<int>(i);
  view.adj.assign(s.size(), 0);
  view.deg.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const int v = s[i];
    view.deg[i] = g.degree(v);
    for (const auto& [w, wt] : g.neighbors(v)) {
      const int p = pos[static_cast<std::size_t>(w)];
      if (p >= 0) view.adj[i] |= std::uint32_t{1} << p;
    }
  }
  return view;
}

}  // namespace

int boundary_count(const WeightedGraph& g, const std::vector<int>& s_prime,
                   const std::vector<int>& s) {
  if (s_prime.empty()) throw ValidationError("boundary_count: S' must be nonempty");
  const auto in_s = membership(g, s, "boundary_count S");
  const auto in_sp = membership(g, s_prime, "boundary_count S'");
  for (int v : s_prime)
    if (!in_s[static_cast<std::size_t>(v)])
      throw ValidationError("boundary_count: S' must be a subset of S");
  int count = 0;
  for (const auto& e : g.edges()) {
    const bool u_sp = in_sp[static_cast<std::size_t>(e.u)];
    const bool v_sp = in_sp[static_cast<std::size_t>(e.v)];
    const bool u_s = in_s[static_cast<std::size_t>(e.u)];
    const bool v_s = in_s[static_cast<std::size_t>(e.v)];
    if ((u_sp && v_s) || (v_sp && u_s)) ++count;
  }
  return count;
}

CloseKnitReport close_knit_ratio(const WeightedGraph& g, const std::vector<int>& s) {
  if (s.empty()) throw ValidationError("close_knit_ratio: S must be nonempty");
  membership(g, s, "close_knit_ratio S");
  if (static_cast<int>(s.size()) > kMaxSubsetSet)
    throw CapacityError("close_knit_ratio: |S| exceeds the subset-scan capacity of 24");
  for (int v : s)
    if (g.degree(v) == 0)
      throw ValidationError("close_knit_ratio: S contains an isolated vertex");
  const SetView view = make_view(g, s);
  const auto [best, mask] = min_ratio_scan(view.adj, view.deg);
  CloseKnitReport report{best, {}};
  for (std::size_t i = 0; i < s.size(); ++i)
    if ((mask >> i) & 1U) report.witness.push_back(view.verts[i]);
  return report;
}

namespace {

// Depth-first include/exclude enumeration of connected k-supersets of {root}.
// Each call consumes budget; returns true once a qualifying witness is found.
struct ConnectedSearch {
  const WeightedGraph& g;
  double r;
  int k;
  long long budget;
  bool exhausted = false;
  std::vector<int> current;
  std::vector<char> in_current;
  std::vector<char> blocked;
  std::vector<int> witness;

  ConnectedSearch(const WeightedGraph& graph, double ratio, int size, long long b)
      : g(graph), r(ratio), k(size), budget(b),
        in_current(static_cast<std::size_t>(graph.vertex_count()), 0),
        blocked(static_cast<std::size_t>(graph.vertex_count()), 0) {}

  bool qualifies() {
    for (int v : current)
      if (g.degree(v) == 0) return false;  // isolated vertex can never reach r > 0
    std::vector<int> sorted = current;
    std::sort(sorted.begin(), sorted.end());
    const SetView view = make_view(g, sorted);
    const auto [best, mask] = min_ratio_scan(view.adj, view.deg);
    (void)mask;
    return best >= r - 1e-12;
  }

  bool extend(std::vector<int> frontier) {
    if (--budget < 0) {
      exhausted = true;
      return false;
    }
    if (static_cast<int>(current.size()) == k) return qualifies();
    if (frontier.empty()) return false;
    // Take the smallest-id candidate; branch on including vs excluding it.
    const int u = frontier.front();
    frontier.erase(frontier.begin());

    // Include u: frontier gains u's unseen neighbors.
    current.push_back(u);
    in_current[static_cast<std::size_t>(u)] = 1;
    std::vector<int> grown = frontier;
    for (const auto& [w, wt] : g.neighbors(u)) {
      if (in_current[static_cast<std::size_t>(w)] || blocked[static_cast<std::size_t>(w)]) continue;
      if (std::find(grown.begin(), grown.end(), w) == grown.end()) grown.push_back(w);
    }
    std::sort(grown.begin(), grown.end());
    if (extend(std::move(grown))) return true;
    current.pop_back();
    in_current[static_cast<std::size_t>(u)] = 0;
    if (exhausted) return false;

    // Exclude u for the rest of this branch.
    blocked[static_cast<std::size_t>(u)] = 1;
    const bool found = extend(std::move(frontier));
    blocked[static_cast<std::size_t>(u)] = 0;
    return found;
  }

  bool run(int root) {
    current = {root};
    in_current.assign(in_current.size(), 0);
    blocked.assign(blocked.size(), 0);
    in_current[static_cast<std::size_t>(root)] = 1;
    std::vector<int> frontier;
    for (const auto& [w, wt] : g.neighbors(root)) frontier.push_back(w);
    std::sort(frontier.begin(), frontier.end());
    if (k == 1) {
      if (--budget < 0) { exhausted = true; return false; }
      if (qualifies()) { witness = current; return true; }
      return false;
    }
    if (extend(std::move(frontier))) {
      witness = current;
      return true;
    }
    return false;
  }
};

}  // namespace

RkCloseKnitResult is_rk_close_knit(const WeightedGraph& g, double r, int k,
                                   long long budget_per_vertex) {
  if (k <= 0) throw ValidationError("is_rk_close_knit: k must be positive");
  if (k > kMaxSubsetSet)
    throw CapacityError("is_rk_close_knit: k exceeds the subset-scan capacity of 24");
  RkCloseKnitResult result{Tri::Yes,
                           std::vector<std::vector<int>>(static_cast<std::size_t>(g.vertex_count())),
                           std::nullopt, false};
  if (k > g.vertex_count()) {
    result.verdict = Tri::No;
    result.failing_vertex = 0;
    return result;
  }
  bool any_indeterminate = false;
  for (int v = 0; v < g.vertex_count(); ++v) {
    ConnectedSearch search(g, r, k, budget_per_vertex);
    const bool found = search.run(v);
    if (found) {
      auto w = search.witness;
      std::sort(w.begin(), w.end());
      result.witnesses[static_cast<std::size_t>(v)] = std::move(w);
    } else if (search.exhausted) {
      any_indeterminate = true;
      result.budget_exhausted = true;
    } else {
      result.verdict = Tri::No;
      result.failing_vertex = v;
      return result;
    }
  }
  if (any_indeterminate) result.verdict = Tri::Indeterminate;
  return result;
}

}  // namespace normdyn
