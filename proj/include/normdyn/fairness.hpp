#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "normdyn/dynamics.hpp"

namespace normdyn {

struct RoundSegmentation {
  std::vector<std::uint64_t> lengths;  // greedy minimal segments covering all vertices
  std::uint64_t trailing;              // leftover steps that never completed a round
};

// Splits a vertex trace into rounds: each round is the smallest initial
// segment of the remaining trace that schedules every vertex at least once.
RoundSegmentation segment_rounds(std::span<const int> trace, int n);

// Does every window of b*(n-1)+1 consecutive steps schedule every vertex?
bool b_fair_check(std::span<const int> trace, int n, int b);

struct FairnessReport {
  std::vector<std::uint64_t> round_lengths;
  std::uint64_t trailing;
  std::uint64_t total_steps;
  double c_hat;                    // n * min over vertices of per-step scheduling frequency
  std::array<double, 4> ghat;      // tail fractions at eps = 1, 2, 4, 8 vs f(n)
  std::uint64_t hammer_cap_hits;
};

inline constexpr std::array<int, 4> kGhatEpsilons{1, 2, 4, 8};

// Runs the scheduler against live dynamics (adaptive kinds depend on the
// configuration) from the all-B start for `rounds` complete rounds and
// reports round-length statistics: ghat(eps) = fraction of rounds longer
// than eps * f_n. Requires rounds >= 100. c_hat is n times the minimum
// per-step scheduling frequency over the whole run for non-adaptive kinds
// (uniform random and round-robin both measure ~1) and 1 by construction
// for the adaptive adversary.
FairnessReport fairness_whp_estimate(const WeightedGraph& g, const PayoffMatrix& payoff,
                                     const ModelParams& params, const SchedulerSpec& spec,
                                     double f_n, int rounds, std::uint64_t seed,
                                     std::uint64_t step_budget = 200000000ULL);

}  // namespace normdyn
