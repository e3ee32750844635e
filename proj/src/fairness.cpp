#include "normdyn/fairness.hpp"

#include <algorithm>

#include "normdyn/errors.hpp"

namespace normdyn {

RoundSegmentation segment_rounds(std::span<const int> trace, int n) {
  if (n <= 0) throw ValidationError("segment_rounds: vertex count must be positive");
  RoundSegmentation seg{{}, 0};
  std::vector<std::uint32_t> stamp(static_cast<std::size_t>(n), 0);
  std::uint32_t epoch = 0;
  int covered = 0;
  std::uint64_t length = 0;
  ++epoch;
  for (int v : trace) {
    if (v < 0 || v >= n) throw ValidationError("segment_rounds: vertex out of range");
    ++length;
    if (stamp[static_cast<std::size_t>(v)] != epoch) {
      stamp[static_cast<std::size_t>(v)] = epoch;
      ++covered;
    }
    if (covered == n) {
      seg.lengths.push_back(length);
      length = 0;
      covered = 0;
      ++epoch;
    }
  }
  seg.trailing = length;
  return seg;
}

bool b_fair_check(std::span<const int> trace, int n, int b) {
  if (n <= 0) throw ValidationError("b_fair_check: vertex count must be positive");
  if (b <= 0) throw ValidationError("b_fair_check: b must be positive");
  const std::size_t window = static_cast<std::size_t>(b) * static_cast<std::size_t>(n - 1) + 1;
  if (trace.size() < window) return true;  // no full window to violate
  std::vector<std::uint64_t> count(static_cast<std::size_t>(n), 0);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const int in = trace[i];
    if (in < 0 || in >= n) throw ValidationError("b_fair_check: vertex out of range");
    if (count[static_cast<std::size_t>(in)]++ == 0) ++distinct;
    if (i + 1 >= window) {
      if (distinct != static_cast<std::size_t>(n)) return false;
      const int out = trace[i + 1 - window];
      if (--count[static_cast<std::size_t>(out)] == 0) --distinct;
    }
  }
  return true;
}

FairnessReport fairness_whp_estimate(const WeightedGraph& g, const PayoffMatrix& payoff,
                                     const ModelParams& params, const SchedulerSpec& spec,
                                     double f_n, int rounds, std::uint64_t seed,
                                     std::uint64_t step_budget) {
  if (rounds < 100) throw ValidationError("fairness_whp_estimate: needs at least 100 rounds");
  const int n = g.vertex_count();
  Rng rng(seed);
  SchedulerState state(spec, n);
  Configuration config = Configuration::all_b(n);

  FairnessReport report{};
  report.round_lengths.reserve(static_cast<std::size_t>(rounds));

  // Per-step scheduling counts for the non-adaptive kinds.
  const bool track_freq = !std::holds_alternative<AdversarialScheduler>(spec);
  std::vector<std::uint64_t> hits(static_cast<std::size_t>(n), 0);

  std::vector<std::uint32_t> stamp(static_cast<std::size_t>(n), 0);
  std::uint32_t epoch = 1;
  int covered = 0;
  std::uint64_t length = 0;
  std::uint64_t steps = 0;

  while (static_cast<int>(report.round_lengths.size()) < rounds) {
    if (steps >= step_budget)
      throw CapacityError("fairness_whp_estimate: step budget exhausted before finishing rounds");
    const int v = state.next_vertex(config, rng);
    const auto probs = update_distribution(g, config, v, params, payoff);
    config.set(v, rng.unit() < probs.p_a ? Strategy::A : Strategy::B);
    ++steps;
    ++length;
    if (stamp[static_cast<std::size_t>(v)] != epoch) {
      stamp[static_cast<std::size_t>(v)] = epoch;
      ++covered;
    }
    if (covered == n) {
      report.round_lengths.push_back(length);
      length = 0;
      covered = 0;
      ++epoch;
    }
    if (track_freq) ++hits[static_cast<std::size_t>(v)];
  }

  report.total_steps = steps;
  report.trailing = length;
  report.hammer_cap_hits = state.hammer_cap_hits();
  if (track_freq && steps > 0) {
    std::uint64_t min_hits = hits[0];
    for (std::uint64_t h : hits) min_hits = std::min(min_hits, h);
    report.c_hat = static_cast<double>(n) * static_cast<double>(min_hits) /
                   static_cast<double>(steps);
  } else {
    report.c_hat = 1.0;  // adaptive hammering covers every vertex within each round
  }
  for (std::size_t i = 0; i < kGhatEpsilons.size(); ++i) {
    const double threshold = kGhatEpsilons[i] * f_n;
    std::size_t over = 0;
    for (std::uint64_t l : report.round_lengths)
      if (static_cast<double>(l) > threshold) ++over;
    report.ghat[i] = static_cast<double>(over) / static_cast<double>(report.round_lengths.size());
  }
  return report;
}

}  // namespace normdyn
