#include <cmath>
#include <limits>

#include "doctest.h"
#include "normdyn/errors.hpp"
#include "normdyn/exact.hpp"
#include "normdyn/experiments.hpp"

using namespace normdyn;

namespace {

const PayoffMatrix kCoord(3.0, 2.0, 0.0, 0.0);   // r* = 0.4
const PayoffMatrix kMild(2.0, 1.0, 0.0, 0.0);    // r* = 1/3

bool same_runs(const std::vector<ReplicaRun>& a, const std::vector<ReplicaRun>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].start_index != b[i].start_index || a[i].replica != b[i].replica ||
        a[i].steps != b[i].steps || a[i].censored != b[i].censored)
      return false;
  return true;
}

}  // namespace

TEST_CASE("default budget: quadratic for contagion, n log n otherwise") {
  const SchedulerSpec random = RandomScheduler{};
  const SchedulerSpec contagion = ContagionScheduler{{}, 0};  // only the kind matters here
  CHECK(default_inertia_budget(contagion, 8) == 12800);       // 200 * 64
  CHECK(default_inertia_budget(random, 16) == 8873);          // ceil(200 * 16 * ln 16)
  CHECK(default_inertia_budget(random, 1) == 200);            // floor kicks in
  CHECK(default_inertia_budget(SchedulerSpec{round_robin(16)}, 16) == 8873);
}

TEST_CASE("inertia estimate validation") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  const SchedulerSpec spec = RandomScheduler{};
  const ModelParams params = ModelParams::from_beta(1.0);
  CHECK_THROWS_AS(p_inertia_mc(g, kCoord, params, spec, 0.0, 0, 30, 100, 1), ValidationError);
  CHECK_THROWS_AS(p_inertia_mc(g, kCoord, params, spec, 1.0, 0, 30, 100, 1), ValidationError);
  CHECK_THROWS_AS(p_inertia_mc(g, kCoord, params, spec, 0.5, 0, 29, 100, 1), ValidationError);
  CHECK_THROWS_AS(p_inertia_mc(g, kCoord, params, spec, 0.5, -1, 30, 100, 1), ValidationError);
  CHECK_THROWS_AS(
      p_inertia_mc_with_starts(g, kCoord, params, spec, 0.5, {}, 30, 100, 1), ValidationError);
}

TEST_CASE("monte carlo hitting mean matches the exact chain on a pair") {
  const WeightedGraph g = WeightedGraph::line(2);
  const ModelParams params = ModelParams::from_beta(2.0);

  // p = 0.4 on two vertices demands count_A >= 2, i.e. the all-A state.
  const ChainMatrix chain = build_chain_random(g, kCoord, params);
  const std::vector<char> target = {0, 0, 0, 1};
  const double exact = expected_hitting_time(chain, target, 0);
  CHECK(exact > 10.0);

  const InertiaEstimate est = p_inertia_mc(g, kCoord, params, RandomScheduler{}, 0.4, 0, 1200,
                                           20000, 4242);
  CHECK(est.usable);
  CHECK(est.censored_runs == 0);
  CHECK(est.worst_start == 0);
  CHECK(est.mean_steps == doctest::Approx(est.all_b_mean));
  CHECK(est.ci_halfwidth > 0.0);
  CHECK(std::abs(est.mean_steps - exact) <= 3.0 * est.ci_halfwidth);
}

TEST_CASE("estimate bookkeeping: ordering, policy strings, budget default") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  const ModelParams params = ModelParams::from_beta(1.0);
  const SchedulerSpec spec = RandomScheduler{};

  const InertiaEstimate est = p_inertia_mc(g, kCoord, params, spec, 0.25, 2, 30, 0, 5, 1, "C_4");
  CHECK(est.start_policy == "all-B + 2 random starts");
  CHECK(est.graph_id == "C_4");
  CHECK(est.budget == default_inertia_budget(spec, 4));
  CHECK(est.runs.size() == 3 * 30);
  for (int i = 0; i < static_cast<int>(est.runs.size()); ++i) {
    CHECK(est.runs[static_cast<std::size_t>(i)].start_index == i / 30);
    CHECK(est.runs[static_cast<std::size_t>(i)].replica == i % 30);
  }

  const InertiaEstimate plain = p_inertia_mc(g, kCoord, params, spec, 0.25, 0, 30, 400, 5);
  CHECK(plain.start_policy == "all-B");
  CHECK(plain.graph_id == "n=4,m=4");
  CHECK(plain.budget == 400);
}

TEST_CASE("explicit starts: satisfied-at-start runs cost zero steps") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  const ModelParams params = ModelParams::from_beta(2.0);
  const std::vector<Configuration> starts = {Configuration::all_b(4), Configuration::all_a(4)};

  // p = 0.25 on four vertices demands count_A >= 3; all-A already qualifies.
  const InertiaEstimate est = p_inertia_mc_with_starts(g, kCoord, params, RandomScheduler{}, 0.25,
                                                       starts, 30, 2000000, 11);
  CHECK(est.start_policy == "2 explicit starts");
  for (const auto& r : est.runs)
    if (r.start_index == 1) {
      CHECK(r.steps == 0);
      CHECK_FALSE(r.censored);
    }
  CHECK(est.worst_start == 0);  // all-B takes strictly longer than 0
  CHECK(est.mean_steps == doctest::Approx(est.all_b_mean));
  CHECK(est.mean_steps > 0.0);
}

TEST_CASE("hopeless target censors every run and is reported unusable") {
  const WeightedGraph g = WeightedGraph::line(2);
  const ModelParams best_response = ModelParams::from_beta(std::numeric_limits<double>::infinity());
  const InertiaEstimate est = p_inertia_mc(g, kCoord, best_response, RandomScheduler{},
                                           0.4, 0, 40, 300, 3);
  CHECK_FALSE(est.usable);
  CHECK(est.censored_runs == 40);
  CHECK(std::isinf(est.mean_steps));
  CHECK(std::isinf(est.all_b_mean));
  for (const auto& r : est.runs) {
    CHECK(r.censored);
    CHECK(r.steps == 300);
  }
}

TEST_CASE("same seed reproduces runs; thread count is irrelevant; seeds matter") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  const ModelParams params = ModelParams::from_beta(1.0);
  const SchedulerSpec spec = RandomScheduler{};

  const InertiaEstimate a = p_inertia_mc(g, kCoord, params, spec, 0.25, 1, 40, 5000, 99, 1);
  const InertiaEstimate b = p_inertia_mc(g, kCoord, params, spec, 0.25, 1, 40, 5000, 99, 1);
  const InertiaEstimate c = p_inertia_mc(g, kCoord, params, spec, 0.25, 1, 40, 5000, 99, 3);
  CHECK(same_runs(a.runs, b.runs));
  CHECK(same_runs(a.runs, c.runs));
  CHECK(a.mean_steps == doctest::Approx(c.mean_steps));

  const InertiaEstimate d = p_inertia_mc(g, kCoord, params, spec, 0.25, 1, 40, 5000, 100, 1);
  CHECK_FALSE(same_runs(a.runs, d.runs));
}

TEST_CASE("waiting time grows with beta when leaving all-B is uphill") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  const SchedulerSpec spec = RandomScheduler{};
  std::vector<InertiaEstimate> ests;
  for (double beta : {2.0, 4.0, 6.0})
    ests.push_back(p_inertia_mc(g, kMild, ModelParams::from_beta(beta), spec, 0.25, 0, 50,
                                3000000, 17));
  for (const auto& e : ests) {
    CHECK(e.usable);
    CHECK(e.censored_runs == 0);
  }
  CHECK(ests[0].mean_steps + ests[0].ci_halfwidth <
        ests[1].mean_steps - ests[1].ci_halfwidth);
  CHECK(ests[1].mean_steps + ests[1].ci_halfwidth <
        ests[2].mean_steps - ests[2].ci_halfwidth);
}

TEST_CASE("pilot picks the smallest workable beta") {
  const WeightedGraph g = WeightedGraph::cycle(8);
  const PilotResult pilot = pilot_beta(g, kMild, RandomScheduler{}, 0.1, 60000, 21);
  CHECK(pilot.beta == 2.0);
  CHECK(pilot.grid == std::vector<double>{2.0, 3.0, 4.0, 5.0, 6.0});
  CHECK(pilot.censor_rates.size() == 1);  // stops at the first success
  CHECK(pilot.censor_rates[0] < 0.05);
}

TEST_CASE("pilot throws when every grid value censors") {
  const WeightedGraph g = WeightedGraph::cycle(8);
  CHECK_THROWS_WITH_AS(pilot_beta(g, kCoord, RandomScheduler{}, 0.1, 40, 21),
                       "pilot_beta: every grid value censored at least 5% of pilot runs",
                       ValidationError);
}

TEST_CASE("scaling experiment validates its size list") {
  const auto graph_of = [](int n) { return WeightedGraph::cycle(n); };
  const auto sched_of = [](const WeightedGraph&) { return SchedulerSpec{RandomScheduler{}}; };
  const ModelParams params = ModelParams::from_beta(2.0);
  CHECK_THROWS_WITH_AS(scaling_experiment("cycle", {4, 5, 6}, graph_of, sched_of, kMild, params,
                                          0.25, 30, 100000, 1),
                       "scaling_experiment: needs at least 4 sizes", ValidationError);
  CHECK_THROWS_WITH_AS(scaling_experiment("cycle", {4, 5, 5, 6}, graph_of, sched_of, kMild,
                                          params, 0.25, 30, 100000, 1),
                       "scaling_experiment: sizes must be strictly increasing", ValidationError);
}

TEST_CASE("scaling experiment fits a finite log-log line and is reproducible") {
  const auto graph_of = [](int n) { return WeightedGraph::cycle(n); };
  const auto sched_of = [](const WeightedGraph&) { return SchedulerSpec{RandomScheduler{}}; };
  const ModelParams params = ModelParams::from_beta(2.0);
  const ScalingReport rep = scaling_experiment("cycle", {4, 5, 6, 7}, graph_of, sched_of, kMild,
                                               params, 0.25, 30, 100000, 7);
  CHECK(rep.family == "cycle");
  CHECK(rep.points.size() == 4);
  CHECK(rep.points[0].n == 4);
  CHECK(rep.points[3].n == 7);
  CHECK(rep.points[0].estimate.graph_id == "cycle_4");
  for (const auto& pt : rep.points) CHECK(pt.estimate.usable);
  CHECK_FALSE(rep.any_censored);
  CHECK(std::isfinite(rep.slope));
  CHECK(std::isfinite(rep.intercept));
  CHECK(rep.slope_stderr >= 0.0);

  const ScalingReport again = scaling_experiment("cycle", {4, 5, 6, 7}, graph_of, sched_of,
                                                 kMild, params, 0.25, 30, 100000, 7);
  CHECK(rep.slope == doctest::Approx(again.slope));
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(rep.points[i].estimate.mean_steps ==
          doctest::Approx(again.points[i].estimate.mean_steps));
}

TEST_CASE("adversary containment: ratio one can never be exceeded") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  const AdversaryReport rep = adversary_containment(g, kCoord, ModelParams::from_beta(1.0), 1.0,
                                                    2000, 3, 5);
  CHECK(rep.r == 1.0);
  CHECK(rep.exceedance_steps == 0);
  CHECK(rep.total_steps == 3 * 2000);
  CHECK(rep.offending_replica == -1);
  CHECK(rep.first_exceedance_step == 0);
  CHECK(rep.offending_window.empty());
  CHECK(rep.per_replica.size() == 3);
  CHECK(rep.max_fraction <= 1.0);
}

TEST_CASE("adversary containment: coin-flip noise exceeds a low ratio") {
  // r = 0.3 on C_4 hammers 3 vertices and leaves a 1-vertex tail; a tail A
  // plus the transiently-A hammered vertex gives count 2 > 1.2. (At r = 0.5
  // the hammer prefix is large enough that containment is structural even at
  // beta = 0, so the low ratio is the interesting one.)
  const WeightedGraph g = WeightedGraph::cycle(4);
  const AdversaryReport rep =
      adversary_containment(g, kCoord, ModelParams::from_beta(0.0), 0.3, 3000, 2, 5);
  CHECK(rep.exceedance_steps > 0);
  CHECK(rep.max_fraction >= 0.5);
  CHECK(rep.offending_replica == 0);
  CHECK(rep.first_exceedance_step >= 1);
  CHECK(rep.hammer_cap_hits == 0);

  std::uint64_t total = 0;
  for (const auto& pr : rep.per_replica) total += pr.exceedances;
  CHECK(total == rep.exceedance_steps);

  // The window is the trailing slice of the offending replica's trajectory,
  // ending exactly at the first step whose A-count crosses r * n.
  REQUIRE_FALSE(rep.offending_window.empty());
  const std::size_t len = rep.offending_window.size();
  CHECK(len == std::min<std::uint64_t>(rep.first_exceedance_step, 256));
  CHECK(rep.offending_window.back().step == rep.first_exceedance_step);
  CHECK(rep.offending_window.back().count_a >= 2);
  for (std::size_t i = 0; i < len; ++i)
    CHECK(rep.offending_window[i].step == rep.first_exceedance_step - (len - 1 - i));
}

TEST_CASE("adversary containment: strong coordination holds the line") {
  const WeightedGraph g = WeightedGraph::cycle(16);
  const PayoffMatrix payoff(6.0, 3.0, 0.0, 0.0);  // r* = 1/3 < 0.5
  const AdversaryReport rep =
      adversary_containment(g, payoff, ModelParams::from_beta(4.0), 0.5, 100000, 3, 12);
  CHECK(rep.exceedance_steps == 0);
  CHECK(rep.max_fraction <= 0.5);
  CHECK(rep.offending_window.empty());
}

TEST_CASE("adversary containment rejects an empty replica set") {
  const WeightedGraph g = WeightedGraph::cycle(4);
  CHECK_THROWS_AS(adversary_containment(g, kCoord, ModelParams::from_beta(1.0), 0.5, 100, 0, 1),
                  ValidationError);
}
