#include "normdyn/arborescence.hpp"

#include <limits>

namespace normdyn {

double min_out_arborescence(int node_count, std::vector<Arc> arcs, int root) {
  const double inf = std::numeric_limits<double>::infinity();
  double total = 0.0;
  int n = node_count;
  for (;;) {
    // Cheapest incoming arc per node.
    std::vector<double> in(static_cast<std::size_t>(n), inf);
    std::vector<int> pre(static_cast<std::size_t>(n), -1);
    for (const auto& a : arcs) {
      if (a.from == a.to) continue;
      if (a.weight < in[static_cast<std::size_t>(a.to)]) {
        in[static_cast<std::size_t>(a.to)] = a.weight;
        pre[static_cast<std::size_t>(a.to)] = a.from;
      }
    }
    for (int v = 0; v < n; ++v)
      if (v != root && in[static_cast<std::size_t>(v)] == inf) return inf;

    // Walk predecessor chains to detect cycles among the chosen arcs.
    int cycles = 0;
    std::vector<int> id(static_cast<std::size_t>(n), -1);
    std::vector<int> visit(static_cast<std::size_t>(n), -1);
    in[static_cast<std::size_t>(root)] = 0.0;
    for (int v = 0; v < n; ++v) {
      total += in[static_cast<std::size_t>(v)];
      int u = v;
      while (u != root && id[static_cast<std::size_t>(u)] == -1 &&
             visit[static_cast<std::size_t>(u)] != v) {
        visit[static_cast<std::size_t>(u)] = v;
        u = pre[static_cast<std::size_t>(u)];
      }
      if (u != root && id[static_cast<std::size_t>(u)] == -1) {  // u closes a cycle
        for (int w = pre[static_cast<std::size_t>(u)]; w != u; w = pre[static_cast<std::size_t>(w)])
          id[static_cast<std::size_t>(w)] = cycles;
        id[static_cast<std::size_t>(u)] = cycles++;
      }
    }
    if (cycles == 0) return total;
    for (int v = 0; v < n; ++v)
      if (id[static_cast<std::size_t>(v)] == -1) id[static_cast<std::size_t>(v)] = cycles++;

    // Contract: arcs into a cycle are re-priced against the cycle arc they displace.
    std::vector<Arc> next;
    next.reserve(arcs.size());
    for (const auto& a : arcs) {
      const int from = id[static_cast<std::size_t>(a.from)];
      const int to = id[static_cast<std::size_t>(a.to)];
      if (from == to) continue;
      next.push_back({from, to, a.weight - in[static_cast<std::size_t>(a.to)]});
    }
    arcs = std::move(next);
    root = id[static_cast<std::size_t>(root)];
    n = cycles;
  }
}

double min_in_arborescence(int node_count, const std::vector<Arc>& arcs, int root) {
  std::vector<Arc> reversed;
  reversed.reserve(arcs.size());
  for (const auto& a : arcs) reversed.push_back({a.to, a.from, a.weight});
  return min_out_arborescence(node_count, std::move(reversed), root);
}

}  // namespace normdyn
