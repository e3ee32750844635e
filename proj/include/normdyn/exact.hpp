#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "normdyn/arborescence.hpp"
#include "normdyn/configuration.hpp"
#include "normdyn/model.hpp"
#include "normdyn/scheduler.hpp"

namespace normdyn {

// Capacity bounds for exact state-space work.
inline constexpr int kMaxChainStates = 16384;        // 2^n for bit-indexed spaces
inline constexpr int kMaxContagionStates = 12288;    // 2^n * n walker-product spaces
inline constexpr int kMaxDenseSolveStates = 4096;    // dense LU solves (stationary, hitting)

// Finite Markov chain over configuration (or configuration x walker) space,
// sparse rows. Plain spaces index states by the packed configuration
// (vertex 0 = least significant bit, A = 1); contagion spaces use
// packed * n + walker.
struct ChainMatrix {
  int state_count = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;
  int graph_n = 0;
  bool contagion_space = false;
  // Restricted chains: positions of the free vertices; states are packed
  // over these positions with every other vertex held at B.
  std::vector<int> free_vertices;

  bool irreducible = false;
  bool aperiodic = false;
  std::vector<std::vector<int>> closed_classes;  // filled when reducible

  double prob(int from, int to) const;
  Configuration config_of(int state) const;
  int walker_of(int state) const;  // -1 for plain spaces
  std::string state_label(int state) const;
  Eigen::MatrixXd dense() const;
};

// Single uniformly-scheduled log-linear update per step.
ChainMatrix build_chain_random(const WeightedGraph& g, const PayoffMatrix& payoff,
                               const ModelParams& params);
// One-round product kernel of the periodic scheduler (the per-step chain is
// time-inhomogeneous; the round kernel is the stationary object).
ChainMatrix build_chain_periodic(const WeightedGraph& g, const PayoffMatrix& payoff,
                                 const ModelParams& params, const PeriodicScheduler& sched);
// Walker-product chain of the contagion scheduler.
ChainMatrix build_chain_contagion(const WeightedGraph& g, const PayoffMatrix& payoff,
                                  const ModelParams& params, const ContagionScheduler& sched);
// Uniform scheduling over all of V with vertices outside `allowed` forced to
// B; the state space is the 2^|allowed| subspace that is B elsewhere.
ChainMatrix build_chain_restricted(const WeightedGraph& g, const PayoffMatrix& payoff,
                                   const ModelParams& params, const std::vector<int>& allowed);

// Recomputes the irreducible/aperiodic flags and closed classes from the
// rows. The builders call this; it is exposed for hand-assembled chains.
void analyze_chain_structure(ChainMatrix& chain);

// Unique stationary distribution of an irreducible chain: transpose, shift
// the diagonal by -1, overwrite one row with the normalization constraint,
// dense solve. Residual ||mu P - mu||_inf is checked against 1e-10.
Eigen::VectorXd stationary(const ChainMatrix& chain);

// Gibbs measure mu(x) proportional to exp(beta * potential(x)) over the full
// configuration space, computed with log-sum-exp. Requires a potential-game
// payoff (c = d) and beta in [0, 50].
Eigen::VectorXd gibbs(const WeightedGraph& g, const PayoffMatrix& payoff, double beta);
// Same measure on the restricted subspace (vertices outside `allowed` at B).
Eigen::VectorXd gibbs_restricted(const WeightedGraph& g, const PayoffMatrix& payoff, double beta,
                                 const std::vector<int>& allowed);

struct DetailedBalanceReport {
  // max over adjacent pairs of | ln(p_xy / p_yx) - beta * (rho(y) - rho(x)) |
  double violation;
  // same quantity with the opposite sign convention (surfaced for contrast)
  double flipped_orientation_residual;
};

// Checks the single-flip chain against the Gibbs-reversible ratio
// p_xy / p_yx = exp(beta * (rho(y) - rho(x))).
DetailedBalanceReport detailed_balance_check(const ChainMatrix& chain, const WeightedGraph& g,
                                             const PayoffMatrix& payoff, double beta);

// Resistance of the single-update move a1 -> a2 at vertex j2 (a2 equals a1,
// or a1 with j2 flipped). Potential comparisons use a 1e-9 tie tolerance:
//   rho(a2) < rho(a1)                ->  rho(a1) - rho(a2)   (downhill flip)
//   a2 = a1 and rho(a3) > rho(a1)    ->  rho(a3) - rho(a1)   (refusing an uphill flip;
//                                         a3 is a1 with j2 flipped)
//   otherwise                        ->  0
double move_resistance(const Configuration& a1, const Configuration& a2, int j2,
                       const WeightedGraph& g, const PayoffMatrix& payoff);

// Empirical exponent of one move's probability on the epsilon grid
// {e^-beta1, e^-beta2}: slope of ln P against ln epsilon.
double fit_move_exponent(const WeightedGraph& g, const PayoffMatrix& payoff,
                         const Configuration& x, int j, Strategy outcome, double beta1 = 8.0,
                         double beta2 = 12.0);

// Same for an arbitrary chain arc; nullopt when the arc has no probability
// at either grid point.
std::optional<double> fit_chain_exponent(
    const std::function<ChainMatrix(double beta)>& builder, int from, int to, double beta1 = 8.0,
    double beta2 = 12.0);

// States and weighted moves of the epsilon-perturbed process; arcs connect
// distinct states, per-vertex staying resistances are kept separately as
// diagnostics.
struct ResistanceDigraph {
  int node_count = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<std::pair<int, double>>> stay_resistance;  // node -> (vertex, r)
  int graph_n = 0;
  bool contagion_space = false;
  std::string state_label(int state) const;
};

ResistanceDigraph resistance_digraph_random(const WeightedGraph& g, const PayoffMatrix& payoff);
ResistanceDigraph resistance_digraph_contagion(const WeightedGraph& g, const PayoffMatrix& payoff,
                                               const ContagionScheduler& sched);
// Arc weights fitted numerically on the one-round product chain.
ResistanceDigraph resistance_digraph_periodic(const WeightedGraph& g, const PayoffMatrix& payoff,
                                              const PeriodicScheduler& sched, double beta1 = 8.0,
                                              double beta2 = 12.0);

struct StableSetReport {
  std::vector<double> root_resistance;  // min in-arborescence weight per state
  std::vector<int> stable;              // argmin set (1e-9 tie tolerance)
  double min_resistance = 0.0;
  bool matches_predicted = false;       // only meaningful when a prediction was given
};

// Stochastically stable states: roots minimizing the total resistance of a
// spanning in-arborescence. `predicted` (optional) is cross-checked against
// the computed argmin set.
StableSetReport stable_states(const ResistanceDigraph& digraph,
                              const std::vector<int>& predicted = {});

// Maximizer of the potential over the restricted subspace (B outside
// `allowed`); ties within 1e-9 are all reported.
std::vector<Configuration> restricted_potential_argmax(const WeightedGraph& g,
                                                       const std::vector<int>& allowed,
                                                       const PayoffMatrix& payoff);

// Expected steps to first reach `target` from `start`:
// (I - Q) h = 1 over the non-target states, dense solve.
double expected_hitting_time(const ChainMatrix& chain, const std::vector<char>& target,
                             int start);

}  // namespace normdyn
