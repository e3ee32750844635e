#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "normdyn/dynamics.hpp"

namespace normdyn {

struct ReplicaRun {
  int start_index;       // 0 = all-B, 1.. = sampled random starts
  int replica;           // index within the start
  std::uint64_t steps;   // hitting step when uncensored, the budget otherwise
  bool censored;
};

// Monte-Carlo estimate of the expected waiting time until at least a 1-p
// fraction of vertices plays A. The reported estimate is the maximum of the
// per-start means; a start whose runs all censored counts as infinite and
// makes the estimate unusable.
struct InertiaEstimate {
  double p = 0.0;
  double beta = 0.0;
  std::string graph_id;
  std::string start_policy;  // "all-B" or "all-B + <k> random starts"
  int replicas_per_start = 0;
  std::uint64_t budget = 0;

  double mean_steps = 0.0;    // worst start, uncensored runs only
  double ci_halfwidth = 0.0;  // 1.96 * sd / sqrt(count) at the worst start
  double all_b_mean = 0.0;
  double all_b_ci = 0.0;
  int worst_start = 0;
  int censored_runs = 0;  // across every start
  bool usable = false;    // the worst start produced at least one uncensored run

  std::vector<ReplicaRun> runs;  // start-major, replica order within a start
};

// 200 n^2 for contagion scheduling, ceil(200 n ln n) otherwise (min 200).
std::uint64_t default_inertia_budget(const SchedulerSpec& spec, int n);

// Runs (1 + random_starts) * replicas independent trajectories, each stopping
// at count_A >= (1-p) n or at the budget. Requires p in (0,1) and
// replicas >= 30. budget = 0 selects the default. Replica seeds are fixed
// functions of (seed, run index): results do not depend on thread count.
InertiaEstimate p_inertia_mc(const WeightedGraph& g, const PayoffMatrix& payoff,
                             const ModelParams& params, const SchedulerSpec& spec, double p,
                             int random_starts, int replicas, std::uint64_t budget,
                             std::uint64_t seed, int threads = 1,
                             const std::string& graph_id = "");

// Same estimator over an explicit list of start configurations (start 0 is
// reported as the all-B slot even if it is not all-B).
InertiaEstimate p_inertia_mc_with_starts(const WeightedGraph& g, const PayoffMatrix& payoff,
                                         const ModelParams& params, const SchedulerSpec& spec,
                                         double p, const std::vector<Configuration>& starts,
                                         int replicas, std::uint64_t budget, std::uint64_t seed,
                                         int threads = 1, const std::string& graph_id = "");

struct PilotResult {
  double beta = 0.0;                 // smallest grid value with censoring < 5%
  std::vector<double> grid;          // betas tried, in order
  std::vector<double> censor_rates;  // matching censoring fractions
};

// Pilot rule for choosing beta: smallest value in {2,3,4,5,6} whose all-B
// censoring rate stays below 5% over `replicas` short runs. Throws
// ValidationError when every grid point censors too often.
PilotResult pilot_beta(const WeightedGraph& g, const PayoffMatrix& payoff,
                       const SchedulerSpec& spec, double p, std::uint64_t budget,
                       std::uint64_t seed, int replicas = 30, int threads = 1);

struct ScalingPoint {
  int n = 0;
  InertiaEstimate estimate;
};

struct ScalingReport {
  std::string family;
  double beta = 0.0;
  double p = 0.0;
  std::vector<ScalingPoint> points;
  double slope = 0.0;  // least-squares fit of ln(mean steps) against ln(n)
  double intercept = 0.0;
  double slope_stderr = 0.0;
  bool any_censored = false;  // propagated from the per-size estimates
};

// Per-size p_inertia_mc (all-B start) followed by a log-log least-squares
// fit over the usable sizes. Requires >= 4 strictly increasing sizes and at
// least two usable points.
ScalingReport scaling_experiment(const std::string& family, const std::vector<int>& sizes,
                                 const std::function<WeightedGraph(int)>& graph_of,
                                 const std::function<SchedulerSpec(const WeightedGraph&)>& sched_of,
                                 const PayoffMatrix& payoff, const ModelParams& params, double p,
                                 int replicas, std::uint64_t budget, std::uint64_t seed,
                                 int threads = 1);

struct AdversaryReplicaSummary {
  double max_fraction = 0.0;
  std::uint64_t exceedances = 0;
  std::uint64_t cap_hits = 0;
};

struct AdversaryReport {
  double r = 0.0;
  double max_fraction = 0.0;          // largest per-step A-fraction observed
  std::uint64_t exceedance_steps = 0;  // steps with fraction strictly above r
  std::uint64_t total_steps = 0;
  std::uint64_t hammer_cap_hits = 0;
  int offending_replica = -1;           // first replica with an exceedance
  std::uint64_t first_exceedance_step = 0;
  std::vector<AdversaryReplicaSummary> per_replica;
  // Trace window (last <= 256 records) ending at the first exceedance,
  // replayed deterministically from the offending replica's seed.
  std::vector<TraceRecord> offending_window;
};

// Containment measurement: from all-B under the adaptive adversarial
// scheduler with ratio r (identity hammer permutation), count the steps whose
// A-fraction exceeds r over `horizon` steps per replica.
AdversaryReport adversary_containment(const WeightedGraph& g, const PayoffMatrix& payoff,
                                      const ModelParams& params, double r, std::uint64_t horizon,
                                      int replicas, std::uint64_t seed, int threads = 1);

}  // namespace normdyn
