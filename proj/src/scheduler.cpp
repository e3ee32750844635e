#include "normdyn/scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

void check_permutation(const std::vector<int>& perm, int n, const char* what) {
  if (static_cast<int>(perm.size()) != n)
    throw ValidationError(std::string(what) + ": permutation has wrong length");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw ValidationError(std::string(what) + ": not a permutation");
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

bool strongly_connected_support(const std::vector<DiscreteDistribution>& rows, int n) {
  // Supports are weakly reversible (validated first), so reachability from
  // vertex 0 in both directions reduces to one BFS over the support graph.
  std::vector<std::vector<int>> out(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (rows[static_cast<std::size_t>(v)].in_support(u)) out[static_cast<std::size_t>(v)].push_back(u);
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : out[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++visited;
        stack.push_back(u);
      }
    }
  }
  return visited == n;
}

}  // namespace

void validate_scheduler(const SchedulerSpec& spec, int n) {
  if (n <= 0) throw ValidationError("scheduler: vertex count must be positive");
  if (std::holds_alternative<RandomScheduler>(spec)) return;

  if (const auto* p = std::get_if<PeriodicScheduler>(&spec)) {
    if (p->dists.empty()) throw ValidationError("periodic scheduler: needs at least one distribution");
    for (const auto& d : p->dists)
      if (d.size() != n)
        throw ValidationError("periodic scheduler: distribution length != vertex count");
    check_permutation(p->order, static_cast<int>(p->dists.size()), "periodic scheduler order");
    std::vector<char> covered(static_cast<std::size_t>(n), 0);
    for (const auto& d : p->dists)
      for (int v = 0; v < n; ++v)
        if (d.in_support(v)) covered[static_cast<std::size_t>(v)] = 1;
    for (int v = 0; v < n; ++v)
      if (!covered[static_cast<std::size_t>(v)])
        throw ValidationError("periodic scheduler: vertex outside every distribution's support");
    return;
  }

  if (const auto* a = std::get_if<AdversarialScheduler>(&spec)) {
    if (!(a->r > 0.0) || a->r > 1.0)
      throw ValidationError("adversarial scheduler: r must lie in (0, 1]");
    check_permutation(a->perm, n, "adversarial scheduler");
    if (a->hammer_cap <= 0) throw ValidationError("adversarial scheduler: hammer cap must be positive");
    return;
  }

  const auto& c = std::get<ContagionScheduler>(spec);
  if (static_cast<int>(c.rows.size()) != n)
    throw ValidationError("contagion scheduler: needs one row per vertex");
  for (const auto& row : c.rows)
    if (row.size() != n)
      throw ValidationError("contagion scheduler: row length != vertex count");
  if (c.start < 0 || c.start >= n)
    throw ValidationError("contagion scheduler: start vertex out of range");
  for (int v = 0; v < n; ++v)
    if (!c.rows[static_cast<std::size_t>(v)].in_support(v))
      throw ValidationError("contagion scheduler: vertex missing from its own support");
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u)
      if (c.rows[static_cast<std::size_t>(v)].in_support(u) !=
          c.rows[static_cast<std::size_t>(u)].in_support(v))
        throw ValidationError("contagion scheduler: support is not weakly reversible");
  if (!strongly_connected_support(c.rows, n))
    throw ValidationError("contagion scheduler: support digraph is not strongly connected");
}

int hammer_count(const AdversarialScheduler& spec, int n) {
  const int h = static_cast<int>(std::ceil(spec.r * n)) + 1;
  return std::min(n, h);
}

PeriodicScheduler round_robin(int n) {
  PeriodicScheduler p;
  for (int v = 0; v < n; ++v) {
    std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
    probs[static_cast<std::size_t>(v)] = 1.0;
    p.dists.emplace_back(std::move(probs));
    p.order.push_back(v);
  }
  return p;
}

ContagionScheduler contagion_uniform(const WeightedGraph& g, int start) {
  const int n = g.vertex_count();
  ContagionScheduler c;
  c.start = start;
  for (int v = 0; v < n; ++v) {
    std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
    const double p = 1.0 / (1.0 + g.degree(v));
    probs[static_cast<std::size_t>(v)] = p;
    for (const auto& [u, w] : g.neighbors(v)) probs[static_cast<std::size_t>(u)] = p;
    c.rows.emplace_back(std::move(probs));
  }
  return c;
}

ContagionScheduler contagion_thirds(const WeightedGraph& g, int start) {
  const int n = g.vertex_count();
  ContagionScheduler c;
  c.start = start;
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) > 2)
      throw ValidationError("thirds walk requires degree <= 2 (line/cycle graphs)");
    std::vector<double> probs(static_cast<std::size_t>(n), 0.0);
    for (const auto& [u, w] : g.neighbors(v)) probs[static_cast<std::size_t>(u)] = 1.0 / 3.0;
    double assigned = 0.0;
    for (double p : probs) assigned += p;
    probs[static_cast<std::size_t>(v)] = 1.0 - assigned;  // lazy mass, >= 1/3
    c.rows.emplace_back(std::move(probs));
  }
  return c;
}

SchedulerState::SchedulerState(const SchedulerSpec& spec, int n) : spec_(&spec), n_(n) {
  validate_scheduler(spec, n);
  if (const auto* c = std::get_if<ContagionScheduler>(&spec)) walker_ = c->start;
}

int SchedulerState::next_vertex(const Configuration& config, Rng& rng) {
  ++steps_;
  if (std::holds_alternative<RandomScheduler>(*spec_)) return rng.uniform_index(n_);

  if (const auto* p = std::get_if<PeriodicScheduler>(&*spec_)) {
    const std::size_t m = p->dists.size();
    const int slot = p->order[static_cast<std::size_t>(cursor_ % m)];
    ++cursor_;
    return p->dists[static_cast<std::size_t>(slot)].sample(rng);
  }

  if (const auto* a = std::get_if<AdversarialScheduler>(&*spec_)) {
    const int hammer = hammer_count(*a, n_);
    for (;;) {
      if (adv_index_ < hammer) {
        const int v = a->perm[static_cast<std::size_t>(adv_index_)];
        if (!slot_open_) {  // initial scheduling of this slot
          slot_open_ = true;
          reschedules_ = 1;
          return v;
        }
        if (config.at(v) != Strategy::B && reschedules_ < a->hammer_cap) {
          ++reschedules_;
          return v;
        }
        if (config.at(v) != Strategy::B) ++cap_hits_;  // gave up at the cap
        slot_open_ = false;
        ++adv_index_;
        continue;
      }
      if (adv_index_ < n_) {
        const int v = a->perm[static_cast<std::size_t>(adv_index_)];
        ++adv_index_;
        return v;
      }
      adv_index_ = 0;  // round complete
      ++rounds_;
    }
  }

  const auto& c = std::get<ContagionScheduler>(*spec_);
  walker_ = c.rows[static_cast<std::size_t>(walker_)].sample(rng);
  return walker_;
}

}  // namespace normdyn
