#pragma once

#include <vector>

namespace normdyn {

struct Arc {
  int from;
  int to;
  double weight;
};

// Minimum total weight of a spanning out-arborescence rooted at `root`
// (unique directed path from root to every node), or +infinity if some node
// is unreachable. Chu-Liu/Edmonds with iterative cycle contraction.
double min_out_arborescence(int node_count, std::vector<Arc> arcs, int root);

// Minimum total weight of a spanning in-arborescence: every node has a
// unique directed path to `root`. (Edmonds on the reversed digraph.)
double min_in_arborescence(int node_count, const std::vector<Arc>& arcs, int root);

}  // namespace normdyn
