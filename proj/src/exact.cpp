#include "normdyn/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

constexpr double kTieTolerance = 1e-9;

void check_exact_params(const ModelParams& params) {
  if (params.infinite() || params.beta > kMaxExactBeta)
    throw ValidationError("exact analysis accepts beta in [0, 50] only");
}

void check_plain_capacity(int n) {
  if (n > 63 || (std::int64_t{1} << n) > kMaxChainStates)
    throw CapacityError("chain state space exceeds the 16384-state capacity (2^n)");
}

// Tarjan SCCs, iterative. Returns component id per state (reverse
// topological: arcs go from higher ids to lower or within a component).
std::vector<int> scc_ids(int n, const std::vector<std::vector<std::pair<int, double>>>& rows,
                         int& comp_count) {
  std::vector<int> index(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0),
      comp(static_cast<std::size_t>(n), -1);
  std::vector<char> on_stack(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  comp_count = 0;
  int next_index = 0;
  struct Frame {
    int v;
    std::size_t edge;
  };
  for (int start = 0; start < n; ++start) {
    if (index[static_cast<std::size_t>(start)] != -1) continue;
    std::vector<Frame> frames{{start, 0}};
    while (!frames.empty()) {
      auto& [v, edge] = frames.back();
      if (edge == 0) {
        index[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = next_index++;
        stack.push_back(v);
        on_stack[static_cast<std::size_t>(v)] = 1;
      }
      const auto& out = rows[static_cast<std::size_t>(v)];
      bool descended = false;
      while (edge < out.size()) {
        const int w = out[edge].first;
        ++edge;
        if (index[static_cast<std::size_t>(w)] == -1) {
          frames.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[static_cast<std::size_t>(w)])
          low[static_cast<std::size_t>(v)] =
              std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
      }
      if (descended) continue;
      if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
        for (;;) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = 0;
          comp[static_cast<std::size_t>(w)] = comp_count;
          if (w == v) break;
        }
        ++comp_count;
      }
      const int child = v;
      frames.pop_back();
      if (!frames.empty()) {
        auto& [pv, pe] = frames.back();
        low[static_cast<std::size_t>(pv)] =
            std::min(low[static_cast<std::size_t>(pv)], low[static_cast<std::size_t>(child)]);
      }
    }
  }
  return comp;
}

}  // namespace

void analyze_chain_structure(ChainMatrix& chain) {
  int comp_count = 0;
  const auto comp = scc_ids(chain.state_count, chain.rows, comp_count);
  chain.irreducible = comp_count == 1;
  chain.closed_classes.clear();
  if (!chain.irreducible) {
    // A class is closed when no arc leaves its component.
    std::vector<char> open(static_cast<std::size_t>(comp_count), 0);
    for (int v = 0; v < chain.state_count; ++v)
      for (const auto& [w, p] : chain.rows[static_cast<std::size_t>(v)])
        if (comp[static_cast<std::size_t>(v)] != comp[static_cast<std::size_t>(w)])
          open[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = 1;
    std::vector<std::vector<int>> classes(static_cast<std::size_t>(comp_count));
    for (int v = 0; v < chain.state_count; ++v)
      classes[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);
    for (int c = 0; c < comp_count; ++c)
      if (!open[static_cast<std::size_t>(c)])
        chain.closed_classes.push_back(std::move(classes[static_cast<std::size_t>(c)]));
    chain.aperiodic = false;
    return;
  }
  // Period of an irreducible chain: gcd over arcs of d(u) + 1 - d(v) for BFS
  // levels d; period 1 means aperiodic.
  std::vector<long long> level(static_cast<std::size_t>(chain.state_count), -1);
  std::vector<int> queue{0};
  level[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    for (const auto& [w, p] : chain.rows[static_cast<std::size_t>(v)]) {
      if (level[static_cast<std::size_t>(w)] == -1) {
        level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  long long g = 0;
  for (int v = 0; v < chain.state_count; ++v)
    for (const auto& [w, p] : chain.rows[static_cast<std::size_t>(v)]) {
      const long long d =
          level[static_cast<std::size_t>(v)] + 1 - level[static_cast<std::size_t>(w)];
      g = std::gcd(g, d < 0 ? -d : d);
    }
  chain.aperiodic = g == 1;
}

namespace {

void check_row_stochastic(const ChainMatrix& chain) {
  for (int v = 0; v < chain.state_count; ++v) {
    double sum = 0.0;
    for (const auto& [w, p] : chain.rows[static_cast<std::size_t>(v)]) sum += p;
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::runtime_error("chain row does not sum to 1 (internal error)");
  }
}

}  // namespace

double ChainMatrix::prob(int from, int to) const {
  for (const auto& [w, p] : rows[static_cast<std::size_t>(from)])
    if (w == to) return p;
  return 0.0;
}

Configuration ChainMatrix::config_of(int state) const {
  std::uint64_t packed =
      contagion_space ? static_cast<std::uint64_t>(state / graph_n) : static_cast<std::uint64_t>(state);
  if (!free_vertices.empty()) {
    Configuration c = Configuration::all_b(graph_n);
    for (std::size_t i = 0; i < free_vertices.size(); ++i)
      if ((packed >> i) & 1ULL) c.set(free_vertices[i], Strategy::A);
    return c;
  }
  return Configuration::from_index(packed, graph_n);
}

int ChainMatrix::walker_of(int state) const { return contagion_space ? state % graph_n : -1; }

std::string ChainMatrix::state_label(int state) const {
  std::string label = config_of(state).to_bitstring();
  if (contagion_space) label += ":" + std::to_string(walker_of(state));
  return label;
}

Eigen::MatrixXd ChainMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(state_count, state_count);
  for (int v = 0; v < state_count; ++v)
    for (const auto& [w, p] : rows[static_cast<std::size_t>(v)]) m(v, w) += p;
  return m;
}

ChainMatrix build_chain_random(const WeightedGraph& g, const PayoffMatrix& payoff,
                               const ModelParams& params) {
  check_exact_params(params);
  const int n = g.vertex_count();
  check_plain_capacity(n);
  const int states = 1 << n;
  ChainMatrix chain;
  chain.state_count = states;
  chain.graph_n = n;
  chain.rows.resize(static_cast<std::size_t>(states));
  const double pick = 1.0 / n;
  for (int s = 0; s < states; ++s) {
    const Configuration x = Configuration::from_index(static_cast<std::uint64_t>(s), n);
    double diag = 0.0;
    auto& row = chain.rows[static_cast<std::size_t>(s)];
    for (int v = 0; v < n; ++v) {
      const auto probs = update_distribution(g, x, v, params, payoff);
      const double p_keep = x.at(v) == Strategy::A ? probs.p_a : probs.p_b;
      const double p_flip = x.at(v) == Strategy::A ? probs.p_b : probs.p_a;
      diag += pick * p_keep;
      if (p_flip > 0.0) row.emplace_back(s ^ (1 << v), pick * p_flip);
    }
    if (diag > 0.0) row.emplace_back(s, diag);
    std::sort(row.begin(), row.end());
  }
  check_row_stochastic(chain);
  analyze_chain_structure(chain);
  return chain;
}

ChainMatrix build_chain_periodic(const WeightedGraph& g, const PayoffMatrix& payoff,
                                 const ModelParams& params, const PeriodicScheduler& sched) {
  check_exact_params(params);
  validate_scheduler(SchedulerSpec{sched}, g.vertex_count());
  const int n = g.vertex_count();
  check_plain_capacity(n);
  const int states = 1 << n;
  if (states > kMaxDenseSolveStates)
    throw CapacityError("periodic product chain exceeds the 4096-state dense-product capacity");

  // Single-vertex update kernels, reused across distributions.
  std::vector<Eigen::MatrixXd> site(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(states, states);
    for (int s = 0; s < states; ++s) {
      const Configuration x = Configuration::from_index(static_cast<std::uint64_t>(s), n);
      const auto probs = update_distribution(g, x, v, params, payoff);
      const int s_a = s | (1 << v);
      const int s_b = s & ~(1 << v);
      m(s, s_a) += probs.p_a;
      m(s, s_b) += probs.p_b;
    }
    site[static_cast<std::size_t>(v)] = std::move(m);
  }

  Eigen::MatrixXd round = Eigen::MatrixXd::Identity(states, states);
  for (int slot : sched.order) {
    const auto& dist = sched.dists[static_cast<std::size_t>(slot)];
    Eigen::MatrixXd step = Eigen::MatrixXd::Zero(states, states);
    for (int v = 0; v < n; ++v)
      if (dist.prob(v) > 0.0) step += dist.prob(v) * site[static_cast<std::size_t>(v)];
    round = round * step;
  }

  ChainMatrix chain;
  chain.state_count = states;
  chain.graph_n = n;
  chain.rows.resize(static_cast<std::size_t>(states));
  for (int s = 0; s < states; ++s)
    for (int t = 0; t < states; ++t)
      if (round(s, t) > 0.0) chain.rows[static_cast<std::size_t>(s)].emplace_back(t, round(s, t));
  check_row_stochastic(chain);
  analyze_chain_structure(chain);
  return chain;
}

ChainMatrix build_chain_contagion(const WeightedGraph& g, const PayoffMatrix& payoff,
                                  const ModelParams& params, const ContagionScheduler& sched) {
  check_exact_params(params);
  validate_scheduler(SchedulerSpec{sched}, g.vertex_count());
  const int n = g.vertex_count();
  if (n > 63 || (std::int64_t{1} << n) * n > kMaxContagionStates)
    throw CapacityError("contagion chain exceeds the 12288-state capacity (2^n * n)");
  const int configs = 1 << n;
  const int states = configs * n;
  ChainMatrix chain;
  chain.state_count = states;
  chain.graph_n = n;
  chain.contagion_space = true;
  chain.rows.resize(static_cast<std::size_t>(states));
  for (int c = 0; c < configs; ++c) {
    const Configuration x = Configuration::from_index(static_cast<std::uint64_t>(c), n);
    for (int v = 0; v < n; ++v) {
      auto& row = chain.rows[static_cast<std::size_t>(c * n + v)];
      const auto& dist = sched.rows[static_cast<std::size_t>(v)];
      for (int u = 0; u < n; ++u) {
        const double pu = dist.prob(u);
        if (pu <= 0.0) continue;
        const auto probs = update_distribution(g, x, u, params, payoff);
        const int c_a = c | (1 << u);
        const int c_b = c & ~(1 << u);
        if (probs.p_a > 0.0) row.emplace_back(c_a * n + u, pu * probs.p_a);
        if (probs.p_b > 0.0) row.emplace_back(c_b * n + u, pu * probs.p_b);
      }
      std::sort(row.begin(), row.end());
    }
  }
  check_row_stochastic(chain);
  analyze_chain_structure(chain);
  return chain;
}

ChainMatrix build_chain_restricted(const WeightedGraph& g, const PayoffMatrix& payoff,
                                   const ModelParams& params, const std::vector<int>& allowed) {
  check_exact_params(params);
  const int n = g.vertex_count();
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  for (int v : allowed) {
    if (v < 0 || v >= n) throw ValidationError("restricted chain: vertex out of range");
    if (in_set[static_cast<std::size_t>(v)])
      throw ValidationError("restricted chain: repeated vertex");
    in_set[static_cast<std::size_t>(v)] = 1;
  }
  if (allowed.empty()) throw ValidationError("restricted chain: the free set must be nonempty");
  std::vector<int> free_sorted = allowed;
  std::sort(free_sorted.begin(), free_sorted.end());
  const int s_bits = static_cast<int>(free_sorted.size());
  check_plain_capacity(s_bits);
  const int states = 1 << s_bits;

  ChainMatrix chain;
  chain.state_count = states;
  chain.graph_n = n;
  chain.free_vertices = free_sorted;
  chain.rows.resize(static_cast<std::size_t>(states));
  const double pick = 1.0 / n;
  for (int s = 0; s < states; ++s) {
    const Configuration x = chain.config_of(s);
    auto& row = chain.rows[static_cast<std::size_t>(s)];
    double diag = pick * (n - s_bits);  // scheduling a frozen vertex keeps it at B
    for (int i = 0; i < s_bits; ++i) {
      const int v = free_sorted[static_cast<std::size_t>(i)];
      const auto probs = update_distribution(g, x, v, params, payoff);
      const double p_keep = x.at(v) == Strategy::A ? probs.p_a : probs.p_b;
      const double p_flip = x.at(v) == Strategy::A ? probs.p_b : probs.p_a;
      diag += pick * p_keep;
      if (p_flip > 0.0) row.emplace_back(s ^ (1 << i), pick * p_flip);
    }
    if (diag > 0.0) row.emplace_back(s, diag);
    std::sort(row.begin(), row.end());
  }
  check_row_stochastic(chain);
  analyze_chain_structure(chain);
  return chain;
}

Eigen::VectorXd stationary(const ChainMatrix& chain) {
  if (!chain.irreducible) {
    std::string msg = "stationary: chain is reducible; closed classes:";
    for (const auto& cls : chain.closed_classes) {
      msg += " {";
      for (std::size_t i = 0; i < cls.size() && i < 4; ++i) {
        if (i) msg += ",";
        msg += chain.state_label(cls[i]);
      }
      if (cls.size() > 4) msg += ",...";
      msg += "}";
    }
    throw ValidationError(msg);
  }
  if (chain.state_count > kMaxDenseSolveStates)
    throw CapacityError("stationary: chain exceeds the 4096-state dense-solve capacity");
  const int n = chain.state_count;
  Eigen::MatrixXd a = chain.dense().transpose();
  a.diagonal().array() -= 1.0;
  a.row(0).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(0) = 1.0;
  Eigen::VectorXd mu = a.partialPivLu().solve(b);
  // Residual check against the stationarity equations themselves.
  double residual = 0.0;
  Eigen::VectorXd muP = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < n; ++v)
    for (const auto& [w, p] : chain.rows[static_cast<std::size_t>(v)]) muP(w) += mu(v) * p;
  for (int v = 0; v < n; ++v) residual = std::max(residual, std::abs(muP(v) - mu(v)));
  if (residual > 1e-10)
    throw std::runtime_error("stationary: solve residual exceeds 1e-10");
  return mu;
}

namespace {

Eigen::VectorXd gibbs_over(const WeightedGraph& g, const PayoffMatrix& payoff, double beta,
                           const std::function<Configuration(int)>& config_of, int states) {
  if (!payoff.potential_game())
    throw ValidationError("gibbs: requires a potential-game payoff (c = d)");
  if (std::isinf(beta) || beta < 0.0 || beta > kMaxExactBeta)
    throw ValidationError("gibbs: beta must lie in [0, 50]");
  Eigen::VectorXd logw(states);
  for (int s = 0; s < states; ++s) logw(s) = beta * potential(g, config_of(s), payoff);
  const double m = logw.maxCoeff();
  Eigen::VectorXd w = (logw.array() - m).exp();
  return w / w.sum();
}

}  // namespace

Eigen::VectorXd gibbs(const WeightedGraph& g, const PayoffMatrix& payoff, double beta) {
  const int n = g.vertex_count();
  check_plain_capacity(n);
  return gibbs_over(
      g, payoff, beta,
      [&](int s) { return Configuration::from_index(static_cast<std::uint64_t>(s), n); }, 1 << n);
}

Eigen::VectorXd gibbs_restricted(const WeightedGraph& g, const PayoffMatrix& payoff, double beta,
                                 const std::vector<int>& allowed) {
  std::vector<int> free_sorted = allowed;
  std::sort(free_sorted.begin(), free_sorted.end());
  const int s_bits = static_cast<int>(free_sorted.size());
  check_plain_capacity(s_bits);
  auto config_of = [&](int s) {
    Configuration c = Configuration::all_b(g.vertex_count());
    for (int i = 0; i < s_bits; ++i)
      if ((s >> i) & 1) c.set(free_sorted[static_cast<std::size_t>(i)], Strategy::A);
    return c;
  };
  return gibbs_over(g, payoff, beta, config_of, 1 << s_bits);
}

DetailedBalanceReport detailed_balance_check(const ChainMatrix& chain, const WeightedGraph& g,
                                             const PayoffMatrix& payoff, double beta) {
  if (chain.contagion_space)
    throw ValidationError("detailed_balance_check: needs a single-flip configuration chain");
  DetailedBalanceReport report{0.0, 0.0};
  for (int x = 0; x < chain.state_count; ++x) {
    for (const auto& [y, pxy] : chain.rows[static_cast<std::size_t>(x)]) {
      if (y <= x) continue;  // each unordered pair once
      if (std::popcount(static_cast<unsigned>(x ^ y)) != 1)
        throw ValidationError("detailed_balance_check: chain has a multi-flip arc");
      const double pyx = chain.prob(y, x);
      if (pxy <= 0.0 || pyx <= 0.0) continue;
      const double lhs = std::log(pxy / pyx);
      const double drho = potential(g, chain.config_of(y), payoff) -
                          potential(g, chain.config_of(x), payoff);
      report.violation = std::max(report.violation, std::abs(lhs - beta * drho));
      report.flipped_orientation_residual =
          std::max(report.flipped_orientation_residual, std::abs(lhs + beta * drho));
    }
  }
  return report;
}

double move_resistance(const Configuration& a1, const Configuration& a2, int j2,
                       const WeightedGraph& g, const PayoffMatrix& payoff) {
  if (a1.size() != g.vertex_count() || a2.size() != g.vertex_count())
    throw ValidationError("move_resistance: configuration size does not match graph");
  if (j2 < 0 || j2 >= g.vertex_count())
    throw ValidationError("move_resistance: vertex out of range");
  bool stays = true;
  for (int v = 0; v < a1.size(); ++v) {
    if (a1.at(v) != a2.at(v)) {
      if (v != j2) throw ValidationError("move_resistance: a2 differs from a1 off the move vertex");
      stays = false;
    }
  }
  const double rho1 = potential(g, a1, payoff);
  if (!stays) {
    const double rho2 = potential(g, a2, payoff);
    return rho2 < rho1 - kTieTolerance ? rho1 - rho2 : 0.0;
  }
  Configuration a3 = a1;
  a3.set(j2, flipped(a1.at(j2)));
  const double rho3 = potential(g, a3, payoff);
  return rho3 > rho1 + kTieTolerance ? rho3 - rho1 : 0.0;
}

double fit_move_exponent(const WeightedGraph& g, const PayoffMatrix& payoff,
                         const Configuration& x, int j, Strategy outcome, double beta1,
                         double beta2) {
  if (beta1 == beta2) throw ValidationError("fit_move_exponent: needs two distinct grid points");
  auto prob_at = [&](double beta) {
    const auto probs = update_distribution(g, x, j, ModelParams::from_beta(beta), payoff);
    return outcome == Strategy::A ? probs.p_a : probs.p_b;
  };
  const double p1 = prob_at(beta1);
  const double p2 = prob_at(beta2);
  if (p1 <= 0.0 || p2 <= 0.0)
    throw ValidationError("fit_move_exponent: move has zero probability on the grid");
  // ln eps = -beta, so the slope of ln P against ln eps is
  // (ln p1 - ln p2) / (beta2 - beta1).
  return (std::log(p1) - std::log(p2)) / (beta2 - beta1);
}

std::optional<double> fit_chain_exponent(
    const std::function<ChainMatrix(double beta)>& builder, int from, int to, double beta1,
    double beta2) {
  if (beta1 == beta2) throw ValidationError("fit_chain_exponent: needs two distinct grid points");
  const double p1 = builder(beta1).prob(from, to);
  const double p2 = builder(beta2).prob(from, to);
  if (p1 <= 0.0 || p2 <= 0.0) return std::nullopt;
  return (std::log(p1) - std::log(p2)) / (beta2 - beta1);
}

std::string ResistanceDigraph::state_label(int state) const {
  if (contagion_space)
    return Configuration::from_index(static_cast<std::uint64_t>(state / graph_n), graph_n)
               .to_bitstring() +
           ":" + std::to_string(state % graph_n);
  return Configuration::from_index(static_cast<std::uint64_t>(state), graph_n).to_bitstring();
}

ResistanceDigraph resistance_digraph_random(const WeightedGraph& g, const PayoffMatrix& payoff) {
  const int n = g.vertex_count();
  check_plain_capacity(n);
  const int states = 1 << n;
  ResistanceDigraph d;
  d.node_count = states;
  d.graph_n = n;
  d.stay_resistance.resize(static_cast<std::size_t>(states));
  for (int s = 0; s < states; ++s) {
    const Configuration x = Configuration::from_index(static_cast<std::uint64_t>(s), n);
    for (int v = 0; v < n; ++v) {
      Configuration y = x;
      y.set(v, flipped(x.at(v)));
      d.arcs.push_back({s, s ^ (1 << v), move_resistance(x, y, v, g, payoff)});
      d.stay_resistance[static_cast<std::size_t>(s)].emplace_back(
          v, move_resistance(x, x, v, g, payoff));
    }
  }
  return d;
}

ResistanceDigraph resistance_digraph_contagion(const WeightedGraph& g, const PayoffMatrix& payoff,
                                               const ContagionScheduler& sched) {
  validate_scheduler(SchedulerSpec{sched}, g.vertex_count());
  const int n = g.vertex_count();
  if (n > 63 || (std::int64_t{1} << n) * n > kMaxContagionStates)
    throw CapacityError("contagion resistance digraph exceeds the 12288-state capacity");
  const int configs = 1 << n;
  ResistanceDigraph d;
  d.node_count = configs * n;
  d.graph_n = n;
  d.contagion_space = true;
  d.stay_resistance.resize(static_cast<std::size_t>(d.node_count));
  for (int c = 0; c < configs; ++c) {
    const Configuration x = Configuration::from_index(static_cast<std::uint64_t>(c), n);
    for (int v = 0; v < n; ++v) {
      const int from = c * n + v;
      const auto& dist = sched.rows[static_cast<std::size_t>(v)];
      for (int u = 0; u < n; ++u) {
        if (!dist.in_support(u)) continue;
        Configuration y = x;
        y.set(u, flipped(x.at(u)));
        const int flip_state = (c ^ (1 << u)) * n + u;
        d.arcs.push_back({from, flip_state, move_resistance(x, y, u, g, payoff)});
        const double stay_r = move_resistance(x, x, u, g, payoff);
        const int stay_state = c * n + u;
        if (stay_state == from)
          d.stay_resistance[static_cast<std::size_t>(from)].emplace_back(u, stay_r);
        else
          d.arcs.push_back({from, stay_state, stay_r});
      }
    }
  }
  return d;
}

ResistanceDigraph resistance_digraph_periodic(const WeightedGraph& g, const PayoffMatrix& payoff,
                                              const PeriodicScheduler& sched, double beta1,
                                              double beta2) {
  const int n = g.vertex_count();
  check_plain_capacity(n);
  const ChainMatrix c1 = build_chain_periodic(g, payoff, ModelParams::from_beta(beta1), sched);
  const ChainMatrix c2 = build_chain_periodic(g, payoff, ModelParams::from_beta(beta2), sched);
  ResistanceDigraph d;
  d.node_count = c1.state_count;
  d.graph_n = n;
  d.stay_resistance.resize(static_cast<std::size_t>(d.node_count));
  for (int s = 0; s < c1.state_count; ++s) {
    for (const auto& [t, p1] : c1.rows[static_cast<std::size_t>(s)]) {
      const double p2 = c2.prob(s, t);
      if (p2 <= 0.0) continue;  // vanished below double range: effectively infinite resistance
      const double slope = (std::log(p1) - std::log(p2)) / (beta2 - beta1);
      if (t == s)
        d.stay_resistance[static_cast<std::size_t>(s)].emplace_back(-1, slope);
      else
        d.arcs.push_back({s, t, std::max(0.0, slope)});
    }
  }
  return d;
}

StableSetReport stable_states(const ResistanceDigraph& digraph, const std::vector<int>& predicted) {
  StableSetReport report;
  report.root_resistance.resize(static_cast<std::size_t>(digraph.node_count));
  for (int root = 0; root < digraph.node_count; ++root)
    report.root_resistance[static_cast<std::size_t>(root)] =
        min_in_arborescence(digraph.node_count, digraph.arcs, root);
  report.min_resistance = *std::min_element(report.root_resistance.begin(),
                                            report.root_resistance.end());
  for (int s = 0; s < digraph.node_count; ++s)
    if (report.root_resistance[static_cast<std::size_t>(s)] <=
        report.min_resistance + kTieTolerance)
      report.stable.push_back(s);
  if (!predicted.empty()) {
    std::vector<int> sorted = predicted;
    std::sort(sorted.begin(), sorted.end());
    report.matches_predicted = sorted == report.stable;
  }
  return report;
}

std::vector<Configuration> restricted_potential_argmax(const WeightedGraph& g,
                                                       const std::vector<int>& allowed,
                                                       const PayoffMatrix& payoff) {
  if (allowed.empty())
    throw ValidationError("restricted_potential_argmax: the free set must be nonempty");
  std::vector<int> free_sorted = allowed;
  std::sort(free_sorted.begin(), free_sorted.end());
  for (std::size_t i = 0; i < free_sorted.size(); ++i) {
    if (free_sorted[i] < 0 || free_sorted[i] >= g.vertex_count())
      throw ValidationError("restricted_potential_argmax: vertex out of range");
    if (i > 0 && free_sorted[i] == free_sorted[i - 1])
      throw ValidationError("restricted_potential_argmax: repeated vertex");
  }
  const int s_bits = static_cast<int>(free_sorted.size());
  check_plain_capacity(s_bits);
  double best = -std::numeric_limits<double>::infinity();
  std::vector<Configuration> argmax;
  for (int s = 0; s < (1 << s_bits); ++s) {
    Configuration c = Configuration::all_b(g.vertex_count());
    for (int i = 0; i < s_bits; ++i)
      if ((s >> i) & 1) c.set(free_sorted[static_cast<std::size_t>(i)], Strategy::A);
    const double rho = potential(g, c, payoff);
    if (rho > best + kTieTolerance) {
      best = rho;
      argmax.clear();
      argmax.push_back(std::move(c));
    } else if (rho >= best - kTieTolerance) {
      argmax.push_back(std::move(c));
    }
  }
  return argmax;
}

double expected_hitting_time(const ChainMatrix& chain, const std::vector<char>& target,
                             int start) {
  if (static_cast<int>(target.size()) != chain.state_count)
    throw ValidationError("expected_hitting_time: target mask length mismatch");
  if (start < 0 || start >= chain.state_count)
    throw ValidationError("expected_hitting_time: start state out of range");
  bool any = false;
  for (char t : target) any = any || t;
  if (!any) throw ValidationError("expected_hitting_time: target set is empty");
  if (target[static_cast<std::size_t>(start)]) return 0.0;
  if (chain.state_count > kMaxDenseSolveStates)
    throw CapacityError("expected_hitting_time: chain exceeds the 4096-state dense-solve capacity");

  std::vector<int> compact(static_cast<std::size_t>(chain.state_count), -1);
  std::vector<int> states;
  for (int s = 0; s < chain.state_count; ++s) {
    if (!target[static_cast<std::size_t>(s)]) {
      compact[static_cast<std::size_t>(s)] = static_cast<int>(states.size());
      states.push_back(s);
    }
  }
  const int m = static_cast<int>(states.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    a(i, i) = 1.0;
    for (const auto& [w, p] : chain.rows[static_cast<std::size_t>(states[static_cast<std::size_t>(i)])]) {
      const int j = compact[static_cast<std::size_t>(w)];
      if (j >= 0) a(i, j) -= p;
    }
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd h = a.partialPivLu().solve(ones);
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (((a * h - ones).cwiseAbs().maxCoeff()) > 1e-8 * scale)
    throw std::runtime_error("expected_hitting_time: solve residual too large");
  return h(compact[static_cast<std::size_t>(start)]);
}

}  // namespace normdyn
