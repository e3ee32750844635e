#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "normdyn/configuration.hpp"
#include "normdyn/graph.hpp"
#include "normdyn/rng.hpp"

namespace normdyn {

// Uniform choice over all vertices each step.
struct RandomScheduler {};

// Fixed finite sequence of distributions D_1..D_m applied cyclically in the
// order given by `order` (a permutation of 0..m-1). Round-robin is the
// special case of point masses.
struct PeriodicScheduler {
  std::vector<DiscreteDistribution> dists;
  std::vector<int> order;
};

// Works in rounds over a fixed vertex permutation: the first ceil(r*n)+1
// vertices are each scheduled repeatedly until they play B (capped), the
// remaining vertices exactly once.
struct AdversarialScheduler {
  double r;
  std::vector<int> perm;
  int hammer_cap = 10000;  // reschedules per vertex per round before advancing
};

// Random-walk scheduling: after vertex v was scheduled, the next vertex is
// drawn from rows[v]. Requires v in supp(rows[v]), weak reversibility
// (u in supp(rows[v]) iff v in supp(rows[u])), and a strongly connected
// support digraph.
struct ContagionScheduler {
  std::vector<DiscreteDistribution> rows;
  int start = 0;
};

using SchedulerSpec =
    std::variant<RandomScheduler, PeriodicScheduler, AdversarialScheduler, ContagionScheduler>;

// Throws ValidationError on any violated structural requirement.
void validate_scheduler(const SchedulerSpec& spec, int n);

// Hammer prefix size: min(n, ceil(r*n) + 1).
int hammer_count(const AdversarialScheduler& spec, int n);

// Convenience constructors.
PeriodicScheduler round_robin(int n);
ContagionScheduler contagion_uniform(const WeightedGraph& g, int start);
// Thirds walk used on lines: 1/3 left / stay / right, missing neighbor mass
// folded into the self-loop at endpoints.
ContagionScheduler contagion_thirds(const WeightedGraph& g, int start);

// Mutable per-run cursor. Adaptive kinds consult the current configuration.
class SchedulerState {
 public:
  SchedulerState(const SchedulerSpec& spec, int n);

  // Picks the vertex updated this step; the caller applies the update to
  // `config` before the next call (the adversary inspects it).
  int next_vertex(const Configuration& config, Rng& rng);

  std::uint64_t steps_issued() const { return steps_; }
  std::uint64_t adversary_rounds_completed() const { return rounds_; }
  std::uint64_t hammer_cap_hits() const { return cap_hits_; }
  int walker() const { return walker_; }

 private:
  const SchedulerSpec* spec_;
  int n_;
  std::uint64_t steps_ = 0;
  // periodic
  std::uint64_t cursor_ = 0;
  // adversarial
  int adv_index_ = 0;
  bool slot_open_ = false;
  int reschedules_ = 0;
  std::uint64_t rounds_ = 0;
  std::uint64_t cap_hits_ = 0;
  // contagion
  int walker_ = 0;
};

}  // namespace normdyn
