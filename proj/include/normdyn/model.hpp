#pragma once

#include "normdyn/configuration.hpp"
#include "normdyn/game.hpp"
#include "normdyn/graph.hpp"

namespace normdyn {

// Total payoff vertex would collect playing `candidate` against the current
// neighbor strategies: sum over incident edges of w * value(candidate, x_j).
double node_payoff(const WeightedGraph& g, const Configuration& x, int vertex,
                   Strategy candidate, const PayoffMatrix& payoff);

// Potential rho*(x) = sum over edges (h,k), h < k, of w_hk * value(x_h, x_k).
// With c = d this is an exact potential for single-vertex flips:
//   node_payoff(i, z1) - node_payoff(i, z2) = rho*(x[i=z1]) - rho*(x[i=z2]).
double potential(const WeightedGraph& g, const Configuration& x, const PayoffMatrix& payoff);

struct UpdateProbabilities {
  double p_a;
  double p_b;
};

// Log-linear response of `vertex` given the rest of x:
//   p(z) proportional to exp(beta * node_payoff(z)), computed in log space.
// beta = 0 is uniform; beta = +inf is the symbolic best response, resolving
// payoff ties (within 1e-9) by keeping the current strategy.
UpdateProbabilities update_distribution(const WeightedGraph& g, const Configuration& x,
                                        int vertex, const ModelParams& params,
                                        const PayoffMatrix& payoff);

}  // namespace normdyn
