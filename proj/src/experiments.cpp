#include "normdyn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "normdyn/errors.hpp"

namespace normdyn {

namespace {

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

struct StartStats {
  double mean = std::numeric_limits<double>::infinity();
  double ci = 0.0;
  int uncensored = 0;
};

StartStats summarize(const std::vector<ReplicaRun>& runs, int start_index) {
  StartStats s;
  double sum = 0.0;
  for (const auto& r : runs)
    if (r.start_index == start_index && !r.censored) {
      sum += static_cast<double>(r.steps);
      ++s.uncensored;
    }
  if (s.uncensored == 0) return s;
  s.mean = sum / s.uncensored;
  double sq = 0.0;
  for (const auto& r : runs)
    if (r.start_index == start_index && !r.censored) {
      const double d = static_cast<double>(r.steps) - s.mean;
      sq += d * d;
    }
  const double var = s.uncensored > 1 ? sq / (s.uncensored - 1) : 0.0;
  s.ci = 1.96 * std::sqrt(var / s.uncensored);
  return s;
}

std::string describe_graph(const WeightedGraph& g) {
  return "n=" + std::to_string(g.vertex_count()) + ",m=" + std::to_string(g.edge_count());
}

}  // namespace

std::uint64_t default_inertia_budget(const SchedulerSpec& spec, int n) {
  const double nn = static_cast<double>(n);
  const double raw = std::holds_alternative<ContagionScheduler>(spec)
                         ? 200.0 * nn * nn
                         : std::ceil(200.0 * nn * std::log(nn));
  return std::max<std::uint64_t>(200, static_cast<std::uint64_t>(raw));
}

InertiaEstimate p_inertia_mc(const WeightedGraph& g, const PayoffMatrix& payoff,
                             const ModelParams& params, const SchedulerSpec& spec, double p,
                             int random_starts, int replicas, std::uint64_t budget,
                             std::uint64_t seed, int threads, const std::string& graph_id) {
  if (random_starts < 0) throw ValidationError("p_inertia_mc: random_starts must be >= 0");
  const int n = g.vertex_count();
  std::vector<Configuration> start_configs;
  start_configs.reserve(static_cast<std::size_t>(1 + random_starts));
  start_configs.push_back(Configuration::all_b(n));
  Rng start_rng(replica_seed(seed, 0x57a7c0def00dULL));
  for (int s = 0; s < random_starts; ++s) {
    Configuration c = Configuration::all_b(n);
    for (int v = 0; v < n; ++v)
      if (start_rng.bernoulli(0.5)) c.set(v, Strategy::A);
    start_configs.push_back(std::move(c));
  }
  InertiaEstimate est = p_inertia_mc_with_starts(g, payoff, params, spec, p, start_configs,
                                                 replicas, budget, seed, threads, graph_id);
  est.start_policy =
      random_starts == 0 ? "all-B" : "all-B + " + std::to_string(random_starts) + " random starts";
  return est;
}

InertiaEstimate p_inertia_mc_with_starts(const WeightedGraph& g, const PayoffMatrix& payoff,
                                         const ModelParams& params, const SchedulerSpec& spec,
                                         double p, const std::vector<Configuration>& start_configs,
                                         int replicas, std::uint64_t budget, std::uint64_t seed,
                                         int threads, const std::string& graph_id) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("p_inertia_mc: p must lie in (0,1)");
  if (replicas < 30) throw ValidationError("p_inertia_mc: needs at least 30 replicas");
  if (start_configs.empty()) throw ValidationError("p_inertia_mc: needs at least one start");
  validate_scheduler(spec, g.vertex_count());
  if (budget == 0) budget = default_inertia_budget(spec, g.vertex_count());

  const int starts = static_cast<int>(start_configs.size());

  InertiaEstimate est;
  est.p = p;
  est.beta = params.beta;
  est.graph_id = graph_id.empty() ? describe_graph(g) : graph_id;
  est.start_policy = std::to_string(starts) + " explicit starts";
  est.replicas_per_start = replicas;
  est.budget = budget;
  est.runs.resize(static_cast<std::size_t>(starts) * static_cast<std::size_t>(replicas));

  parallel_for(starts * replicas, threads, [&](int i) {
    const int start_index = i / replicas;
    const int replica = i % replicas;
    const auto result =
        run(g, start_configs[static_cast<std::size_t>(start_index)], spec, params, payoff,
            FractionARule{p}, budget, replica_seed(seed, static_cast<std::uint64_t>(i)));
    est.runs[static_cast<std::size_t>(i)] =
        ReplicaRun{start_index, replica, result.steps, result.truncated};
  });

  double worst = -1.0;
  for (int s = 0; s < starts; ++s) {
    const StartStats stats = summarize(est.runs, s);
    if (s == 0) {
      est.all_b_mean = stats.uncensored ? stats.mean : std::numeric_limits<double>::infinity();
      est.all_b_ci = stats.ci;
    }
    const double mean = stats.uncensored ? stats.mean : std::numeric_limits<double>::infinity();
    if (mean > worst) {
      worst = mean;
      est.worst_start = s;
      est.mean_steps = mean;
      est.ci_halfwidth = stats.ci;
      est.usable = stats.uncensored > 0;
    }
  }
  for (const auto& r : est.runs) est.censored_runs += r.censored ? 1 : 0;
  return est;
}

PilotResult pilot_beta(const WeightedGraph& g, const PayoffMatrix& payoff,
                       const SchedulerSpec& spec, double p, std::uint64_t budget,
                       std::uint64_t seed, int replicas, int threads) {
  PilotResult result;
  result.grid = {2.0, 3.0, 4.0, 5.0, 6.0};
  for (double beta : result.grid) {
    const InertiaEstimate est = p_inertia_mc(g, payoff, ModelParams::from_beta(beta), spec, p, 0,
                                             replicas, budget, seed, threads);
    const double rate =
        static_cast<double>(est.censored_runs) / static_cast<double>(est.runs.size());
    result.censor_rates.push_back(rate);
    if (rate < 0.05) {
      result.beta = beta;
      return result;
    }
  }
  throw ValidationError("pilot_beta: every grid value censored at least 5% of pilot runs");
}

ScalingReport scaling_experiment(const std::string& family, const std::vector<int>& sizes,
                                 const std::function<WeightedGraph(int)>& graph_of,
                                 const std::function<SchedulerSpec(const WeightedGraph&)>& sched_of,
                                 const PayoffMatrix& payoff, const ModelParams& params, double p,
                                 int replicas, std::uint64_t budget, std::uint64_t seed,
                                 int threads) {
  if (sizes.size() < 4)
    throw ValidationError("scaling_experiment: needs at least 4 sizes");
  for (std::size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw ValidationError("scaling_experiment: sizes must be strictly increasing");

  ScalingReport report;
  report.family = family;
  report.beta = params.beta;
  report.p = p;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const WeightedGraph g = graph_of(sizes[i]);
    const SchedulerSpec spec = sched_of(g);
    InertiaEstimate est =
        p_inertia_mc(g, payoff, params, spec, p, 0, replicas, budget,
                     replica_seed(seed, 0x512e0000ULL + i), threads,
                     family + "_" + std::to_string(sizes[i]));
    report.any_censored = report.any_censored || est.censored_runs > 0;
    report.points.push_back({sizes[i], std::move(est)});
  }

  // ln(mean) against ln(n) over the usable sizes.
  std::vector<double> xs, ys;
  for (const auto& pt : report.points)
    if (pt.estimate.usable) {
      xs.push_back(std::log(static_cast<double>(pt.n)));
      ys.push_back(std::log(std::max(pt.estimate.mean_steps, 1e-12)));
    }
  const std::size_t m = xs.size();
  if (m < 2)
    throw ValidationError("scaling_experiment: fewer than two usable sizes (censoring)");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = ys[i] - (report.intercept + report.slope * xs[i]);
    sse += e * e;
  }
  report.slope_stderr = m > 2 ? std::sqrt(sse / (m - 2) / sxx) : 0.0;
  return report;
}

namespace {

struct AdversaryReplica {
  double max_fraction = 0.0;
  std::uint64_t exceedances = 0;
  std::uint64_t cap_hits = 0;
  std::uint64_t first_exceedance_step = 0;  // 0 = none
};

AdversaryReplica adversary_replica(const WeightedGraph& g, const PayoffMatrix& payoff,
                                   const ModelParams& params, const SchedulerSpec& spec, double r,
                                   std::uint64_t horizon, std::uint64_t run_seed,
                                   TraceSink* sink, std::uint64_t stop_at) {
  AdversaryReplica out;
  const int n = g.vertex_count();
  Configuration config = Configuration::all_b(n);
  SchedulerState state(spec, n);
  Rng rng(run_seed);
  const double limit = r * n + 1e-9;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    const TraceRecord rec = step(g, config, state, params, payoff, rng);
    if (sink) sink->record(rec);
    const double frac = static_cast<double>(rec.count_a) / n;
    out.max_fraction = std::max(out.max_fraction, frac);
    if (static_cast<double>(rec.count_a) > limit) {
      ++out.exceedances;
      if (out.first_exceedance_step == 0) out.first_exceedance_step = t;
    }
    if (stop_at != 0 && t == stop_at) break;
  }
  out.cap_hits = state.hammer_cap_hits();
  return out;
}

}  // namespace

AdversaryReport adversary_containment(const WeightedGraph& g, const PayoffMatrix& payoff,
                                      const ModelParams& params, double r, std::uint64_t horizon,
                                      int replicas, std::uint64_t seed, int threads) {
  if (replicas < 1) throw ValidationError("adversary_containment: needs at least one replica");
  const int n = g.vertex_count();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) perm[static_cast<std::size_t>(v)] = v;
  const SchedulerSpec spec = AdversarialScheduler{r, std::move(perm), 10000};
  validate_scheduler(spec, n);

  std::vector<AdversaryReplica> results(static_cast<std::size_t>(replicas));
  parallel_for(replicas, threads, [&](int i) {
    results[static_cast<std::size_t>(i)] =
        adversary_replica(g, payoff, params, spec, r, horizon,
                          replica_seed(seed, static_cast<std::uint64_t>(i)), nullptr, 0);
  });

  AdversaryReport report;
  report.r = r;
  for (int i = 0; i < replicas; ++i) {
    const auto& res = results[static_cast<std::size_t>(i)];
    report.max_fraction = std::max(report.max_fraction, res.max_fraction);
    report.exceedance_steps += res.exceedances;
    report.total_steps += horizon;
    report.hammer_cap_hits += res.cap_hits;
    report.per_replica.push_back({res.max_fraction, res.exceedances, res.cap_hits});
    if (res.first_exceedance_step != 0 && report.offending_replica < 0) {
      report.offending_replica = i;
      report.first_exceedance_step = res.first_exceedance_step;
    }
  }
  if (report.offending_replica >= 0) {
    // Deterministic replay of the offending replica up to the exceedance,
    // keeping the trailing window.
    RingSink ring(256);
    adversary_replica(g, payoff, params, spec, r, horizon,
                      replica_seed(seed, static_cast<std::uint64_t>(report.offending_replica)),
                      &ring, report.first_exceedance_step);
    report.offending_window.assign(ring.records.begin(), ring.records.end());
  }
  return report;
}

}  // namespace normdyn
