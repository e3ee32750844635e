#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "normdyn/errors.hpp"

namespace normdyn {

// Undirected weighted edge, stored with u < v.
struct WeightedEdge {
  int u;
  int v;
  double weight;
};

// Finite simple undirected graph with positive edge weights.
class WeightedGraph {
 public:
  explicit WeightedGraph(int n);

  void add_edge(int u, int v, double weight = 1.0);

  int vertex_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  // Neighbors of v as (vertex, weight) pairs.
  const std::vector<std::pair<int, double>>& neighbors(int v) const {
    return adj_[static_cast<std::size_t>(v)];
  }

  // Unweighted degree (number of incident edges).
  int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

  bool has_edge(int u, int v) const;
  bool connected() const;

  // Standard families, uniform edge weight.
  static WeightedGraph cycle(int n, double weight = 1.0);  // C_n, n >= 3
  static WeightedGraph line(int n, double weight = 1.0);   // path; center index (n-1)/2
  static WeightedGraph complete(int n, double weight = 1.0);  // K_n, n >= 1
  static WeightedGraph grid(int rows, int cols, double weight = 1.0);

  std::string to_text() const;

 private:
  int n_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<std::pair<int, double>>> adj_;
};

// Text format: "n m" header, then m lines "h k w". An optional trailing
// section starting with the bare word "contagion" carries n rows of n reals
// (a row-stochastic scheduling matrix, row v = distribution used after v).
struct GraphFile {
  WeightedGraph graph;
  std::optional<std::vector<std::vector<double>>> contagion_rows;
};

GraphFile load_graph_file(const std::string& path);
GraphFile parse_graph_text(const std::string& text);
void save_graph_file(const WeightedGraph& g, const std::string& path);

}  // namespace normdyn
