#include "normdyn/dynamics.hpp"

#include <cmath>
#include <cstdio>

namespace normdyn {

CsvTraceSink::CsvTraceSink(std::ostream& out) : out_(out) {
  out_ << "step,vertex,pre,post,countA,potential\n";
}

void CsvTraceSink::record(const TraceRecord& rec) {
  char buf[160];
  char pot[48] = "";
  if (rec.has_potential) std::snprintf(pot, sizeof pot, "%.17g", rec.potential);
  std::snprintf(buf, sizeof buf, "%llu,%d,%c,%c,%d,%s\n",
                static_cast<unsigned long long>(rec.step), rec.vertex, to_char(rec.before),
                to_char(rec.after), rec.count_a, pot);
  out_ << buf;
}

namespace {

Strategy sample_strategy(const UpdateProbabilities& probs, Rng& rng) {
  return rng.unit() < probs.p_a ? Strategy::A : Strategy::B;
}

struct RuleWatcher {
  const StoppingRule& rule;
  int n;

  bool satisfied(int count_a) const {
    if (std::holds_alternative<StepsRule>(rule)) return false;  // handled by the loop bound
    if (const auto* f = std::get_if<FractionARule>(&rule)) {
      const double target = (1.0 - f->p) * n;
      return static_cast<double>(count_a) >= target - 1e-9;
    }
    return count_a == 0 || count_a == n;
  }
};

RunResult run_impl(const WeightedGraph& g, Configuration config, const SchedulerSpec& spec,
                   const ModelParams& params, const PayoffMatrix& payoff,
                   const StoppingRule& rule, std::uint64_t step_budget, std::uint64_t seed,
                   const std::vector<char>* allowed, TraceSink* sink, bool track_potential) {
  if (config.size() != g.vertex_count())
    throw ValidationError("run: configuration size does not match graph");
  if (const auto* f = std::get_if<FractionARule>(&rule))
    if (!(f->p >= 0.0) || f->p > 1.0)
      throw ValidationError("run: fraction rule needs p in [0, 1]");

  Rng rng(seed);
  SchedulerState state(spec, g.vertex_count());
  RuleWatcher watcher{rule, g.vertex_count()};

  std::uint64_t limit = step_budget;
  if (const auto* s = std::get_if<StepsRule>(&rule)) limit = std::min(limit, s->limit);

  int count_a = config.count_a();
  double pot = track_potential ? potential(g, config, payoff) : 0.0;

  std::uint64_t steps = 0;
  bool truncated = false;
  if (!watcher.satisfied(count_a)) {
    while (steps < limit) {
      const int v = state.next_vertex(config, rng);
      const Strategy before = config.at(v);
      Strategy after;
      if (allowed && !(*allowed)[static_cast<std::size_t>(v)]) {
        after = Strategy::B;
      } else {
        after = sample_strategy(update_distribution(g, config, v, params, payoff), rng);
      }
      if (after != before) {
        if (track_potential) {
          const double off = node_payoff(g, config, v, before, payoff);
          config.set(v, after);
          pot += node_payoff(g, config, v, after, payoff) - off;
        } else {
          config.set(v, after);
        }
        count_a += after == Strategy::A ? 1 : -1;
      }
      ++steps;
      if (sink) sink->record({steps, v, before, after, count_a, pot, track_potential});
      if (watcher.satisfied(count_a)) break;
    }
    if (steps == limit && !watcher.satisfied(count_a)) {
      // A steps rule that ran its full count is a normal finish; anything
      // else stopping at the budget is a truncation.
      const auto* s = std::get_if<StepsRule>(&rule);
      truncated = !(s && steps == s->limit);
    }
  }
  return {std::move(config), steps, truncated, state.hammer_cap_hits()};
}

}  // namespace

TraceRecord step(const WeightedGraph& g, Configuration& config, SchedulerState& state,
                 const ModelParams& params, const PayoffMatrix& payoff, Rng& rng) {
  const int v = state.next_vertex(config, rng);
  const Strategy before = config.at(v);
  const Strategy after = sample_strategy(update_distribution(g, config, v, params, payoff), rng);
  config.set(v, after);
  return {state.steps_issued(), v, before, after, config.count_a(), 0.0, false};
}

RunResult run(const WeightedGraph& g, Configuration initial, const SchedulerSpec& spec,
              const ModelParams& params, const PayoffMatrix& payoff, const StoppingRule& rule,
              std::uint64_t step_budget, std::uint64_t seed, TraceSink* sink,
              bool track_potential) {
  return run_impl(g, std::move(initial), spec, params, payoff, rule, step_budget, seed, nullptr,
                  sink, track_potential);
}

RunResult run_restricted(const WeightedGraph& g, Configuration initial, const SchedulerSpec& spec,
                         const ModelParams& params, const PayoffMatrix& payoff,
                         const StoppingRule& rule, std::uint64_t step_budget, std::uint64_t seed,
                         const std::vector<int>& allowed, TraceSink* sink, bool track_potential) {
  std::vector<char> mask(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v : allowed) {
    if (v < 0 || v >= g.vertex_count())
      throw ValidationError("run_restricted: allowed vertex out of range");
    mask[static_cast<std::size_t>(v)] = 1;
  }
  return run_impl(g, std::move(initial), spec, params, payoff, rule, step_budget, seed, &mask,
                  sink, track_potential);
}

}  // namespace normdyn
