#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "normdyn/configuration.hpp"
#include "normdyn/model.hpp"
#include "normdyn/scheduler.hpp"

namespace normdyn {

struct TraceRecord {
  std::uint64_t step;   // 1-based
  int vertex;
  Strategy before;
  Strategy after;
  int count_a;          // after the update
  double potential;     // only meaningful when tracked
  bool has_potential;
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const TraceRecord& rec) = 0;
};

class VectorSink : public TraceSink {
 public:
  void record(const TraceRecord& rec) override { records.push_back(rec); }
  std::vector<TraceRecord> records;
};

// Keeps only the most recent `capacity` records.
class RingSink : public TraceSink {
 public:
  explicit RingSink(std::size_t capacity) : capacity_(capacity) {}
  void record(const TraceRecord& rec) override {
    if (records.size() == capacity_) records.pop_front();
    records.push_back(rec);
  }
  std::deque<TraceRecord> records;

 private:
  std::size_t capacity_;
};

// Streams rows "step,vertex,pre,post,countA,potential".
class CsvTraceSink : public TraceSink {
 public:
  explicit CsvTraceSink(std::ostream& out);
  void record(const TraceRecord& rec) override;

 private:
  std::ostream& out_;
};

struct StepsRule { std::uint64_t limit; };          // stop after exactly `limit` steps
struct FractionARule { double p; };                 // stop once countA >= (1-p) * n
struct AbsorptionRule {};                           // stop at all-A or all-B
using StoppingRule = std::variant<StepsRule, FractionARule, AbsorptionRule>;

struct RunResult {
  Configuration final_config;
  std::uint64_t steps;
  bool truncated;                 // budget exhausted before the rule fired
  std::uint64_t hammer_cap_hits;  // adversarial scheduler diagnostics
};

// One scheduled update. Advances the scheduler, resamples the chosen vertex,
// mutates `config`, and returns the record.
TraceRecord step(const WeightedGraph& g, Configuration& config, SchedulerState& state,
                 const ModelParams& params, const PayoffMatrix& payoff, Rng& rng);

// Runs until the stopping rule fires or `step_budget` steps have been taken
// (truncation is a flag, not an error). Identical (graph, spec, params,
// payoff, rule, seed) inputs replay the identical trace.
RunResult run(const WeightedGraph& g, Configuration initial, const SchedulerSpec& spec,
              const ModelParams& params, const PayoffMatrix& payoff, const StoppingRule& rule,
              std::uint64_t step_budget, std::uint64_t seed, TraceSink* sink = nullptr,
              bool track_potential = false);

// Same, but vertices outside `allowed` are deterministically set to B when
// scheduled (the dynamics restricted to a set).
RunResult run_restricted(const WeightedGraph& g, Configuration initial, const SchedulerSpec& spec,
                         const ModelParams& params, const PayoffMatrix& payoff,
                         const StoppingRule& rule, std::uint64_t step_budget, std::uint64_t seed,
                         const std::vector<int>& allowed, TraceSink* sink = nullptr,
                         bool track_potential = false);

}  // namespace normdyn
