#include "normdyn/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace normdyn {

WeightedGraph::WeightedGraph(int n) : n_(n) {
  if (n <= 0) throw ValidationError("graph needs a positive vertex count");
  adj_.resize(static_cast<std::size_t>(n));
}

void WeightedGraph::add_edge(int u, int v, double weight) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_)
    throw ValidationError("edge endpoint out of range");
  if (u == v) throw ValidationError("self-loop edges are not allowed");
  if (!(weight > 0.0)) throw ValidationError("edge weight must be positive");
  if (has_edge(u, v)) throw ValidationError("duplicate edge");
  if (u > v) std::swap(u, v);
  edges_.push_back({u, v, weight});
  adj_[static_cast<std::size_t>(u)].emplace_back(v, weight);
  adj_[static_cast<std::size_t>(v)].emplace_back(u, weight);
}

bool WeightedGraph::has_edge(int u, int v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
  for (const auto& [w, wt] : adj_[static_cast<std::size_t>(u)])
    if (w == v) return true;
  return false;
}

bool WeightedGraph::connected() const {
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [w, wt] : adj_[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  return visited == n_;
}

WeightedGraph WeightedGraph::cycle(int n, double weight) {
  if (n < 3) throw ValidationError("cycle needs at least 3 vertices");
  WeightedGraph g(n);
  for (int v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n, weight);
  return g;
}

WeightedGraph WeightedGraph::line(int n, double weight) {
  WeightedGraph g(n);  // n >= 1 checked by the constructor
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1, weight);
  return g;
}

WeightedGraph WeightedGraph::complete(int n, double weight) {
  WeightedGraph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v, weight);
  return g;
}

WeightedGraph WeightedGraph::grid(int rows, int cols, double weight) {
  if (rows <= 0 || cols <= 0) throw ValidationError("grid needs positive dimensions");
  WeightedGraph g(rows * cols);
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.add_edge(id(r, c), id(r, c + 1), weight);
      if (r + 1 < rows) g.add_edge(id(r, c), id(r + 1, c), weight);
    }
  }
  return g;
}

std::string WeightedGraph::to_text() const {
  std::ostringstream out;
  out << n_ << ' ' << edges_.size() << '\n';
  for (const auto& e : edges_) {
    out << e.u << ' ' << e.v << ' ';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out << buf << '\n';
  }
  return out.str();
}

GraphFile parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw ValidationError("graph file: missing 'n m' header");
  if (n <= 0) throw ValidationError("graph file: vertex count must be positive");
  if (m < 0) throw ValidationError("graph file: negative edge count");
  WeightedGraph g(n);
  for (int i = 0; i < m; ++i) {
    int u = 0, v = 0;
    double w = 0.0;
    if (!(in >> u >> v >> w))
      throw ValidationError("graph file: truncated edge list");
    g.add_edge(u, v, w);
  }
  GraphFile out{std::move(g), std::nullopt};
  std::string word;
  if (in >> word) {
    if (word != "contagion")
      throw ValidationError("graph file: unexpected trailing token '" + word + "'");
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n)));
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (!(in >> rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]))
          throw ValidationError("graph file: truncated contagion matrix");
    if (in >> word) throw ValidationError("graph file: trailing data after contagion matrix");
    out.contagion_rows = std::move(rows);
  }
  return out;
}

GraphFile load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph_text(buf.str());
}

void save_graph_file(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write graph file: " + path);
  out << g.to_text();
}

}  // namespace normdyn
