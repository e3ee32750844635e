#include "normdyn/model.hpp"

#include <cmath>

namespace normdyn {

namespace {
constexpr double kTieTolerance = 1e-9;

void check_vertex(const WeightedGraph& g, const Configuration& x, int vertex) {
  if (x.size() != g.vertex_count())
    throw ValidationError("configuration size does not match graph");
  if (vertex < 0 || vertex >= g.vertex_count())
    throw ValidationError("vertex out of range");
}
}  // namespace

double node_payoff(const WeightedGraph& g, const Configuration& x, int vertex,
                   Strategy candidate, const PayoffMatrix& payoff) {
  check_vertex(g, x, vertex);
  double total = 0.0;
  for (const auto& [j, w] : g.neighbors(vertex))
    total += w * payoff.value(candidate, x.at(j));
  return total;
}

double potential(const WeightedGraph& g, const Configuration& x, const PayoffMatrix& payoff) {
  if (x.size() != g.vertex_count())
    throw ValidationError("configuration size does not match graph");
  double total = 0.0;
  for (const auto& e : g.edges())  // endpoints already canonical (u < v)
    total += e.weight * payoff.value(x.at(e.u), x.at(e.v));
  return total;
}

UpdateProbabilities update_distribution(const WeightedGraph& g, const Configuration& x,
                                        int vertex, const ModelParams& params,
                                        const PayoffMatrix& payoff) {
  const double nu_a = node_payoff(g, x, vertex, Strategy::A, payoff);
  const double nu_b = node_payoff(g, x, vertex, Strategy::B, payoff);
  if (params.infinite()) {
    if (std::abs(nu_a - nu_b) <= kTieTolerance) {
      // Best-response tie: keep the current strategy.
      return x.at(vertex) == Strategy::A ? UpdateProbabilities{1.0, 0.0}
                                         : UpdateProbabilities{0.0, 1.0};
    }
    return nu_a > nu_b ? UpdateProbabilities{1.0, 0.0} : UpdateProbabilities{0.0, 1.0};
  }
  // p_a = exp(beta*nu_a) / (exp(beta*nu_a) + exp(beta*nu_b)), max exponent
  // subtracted so the larger term is exp(0).
  const double ea = params.beta * nu_a;
  const double eb = params.beta * nu_b;
  if (ea >= eb) {
    const double t = std::exp(eb - ea);
    return {1.0 / (1.0 + t), t / (1.0 + t)};
  }
  const double t = std::exp(ea - eb);
  return {t / (1.0 + t), 1.0 / (1.0 + t)};
}

}  // namespace normdyn
