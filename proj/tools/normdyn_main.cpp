#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "normdyn/close_knit.hpp"
#include "normdyn/dynamics.hpp"
#include "normdyn/errors.hpp"
#include "normdyn/exact.hpp"
#include "normdyn/experiments.hpp"
#include "normdyn/fairness.hpp"
#include "normdyn/run_config.hpp"

namespace {

using namespace normdyn;

constexpr const char* kVersion = "1.0.0";

constexpr const char* kHelp =
    R"(normdyn <command> --config PATH [--seed N] [--threads N] [--out DIR]

Batch toolkit for log-linear norm dynamics on weighted graphs.

Commands
  simulate          Run the dynamics, write trace.csv, print a summary.
  exact-stationary  Stationary distribution of the induced chain; Gibbs check.
  stable-states     Zero-noise stable states via resistance arborescences.
  close-knit        (r,k)-close-knit verdict with per-vertex witnesses.
  inertia           Monte-Carlo p-inertia estimate (exit 4 if unusable).
  scaling           Inertia scaling over a graph family; log-log slope.
  adversary         Containment: A-fraction exceedances over a horizon.
  fairness          Round-length statistics: c-hat and ghat tail fractions.

Flags
  --config PATH     Run configuration file (required).
  --seed N          Overrides [run] seed (default 1).
  --threads N       Worker threads for replica experiments (default: machine).
  --out DIR         Output directory (default: current directory).
  --help            This text.

Config file: flat "key = value" lines under [section] headers; '#' starts a
comment. Unknown keys are rejected per command. Sections and keys:

[game]      a, b, c, d           payoffs value(A,A)=a value(B,B)=b
                                 value(A,B)=c value(B,A)=d; requires a>d,
                                 b>c, a-d>b-c; c=d unless allow_non_potential
            beta                 inverse noise, nonnegative or "inf"
            allow_non_potential  accept c != d (disables Gibbs oracles)
[graph]     kind                 cycle | line | complete | grid | file
            n                    vertex count (cycle, line, complete)
            rows, cols           grid dimensions
            weight               generator edge weight (default 1)
            path                 graph file (kind = file)
[scheduler] kind                 random | round-robin | adversarial |
                                 contagion-uniform | contagion-thirds |
                                 contagion-file
            r                    adversarial hammer ratio in (0,1]
            hammer_cap           adversarial reschedule cap (default 10000)
            perm                 adversarial vertex order (default identity)
            start                contagion walker start (thirds: center)
[run]       seed                 64-bit seed (--seed overrides; default 1)
            steps                simulate: exact step count
            start                simulate: all-b | all-a | bitstring
            track_potential      simulate: potential column (needs c = d)
            p                    inertia, scaling: target fraction in (0,1)
            replicas             inertia, scaling, adversary (default 50)
            random_starts        inertia: extra uniform starts (default 0)
            budget               inertia, scaling: step cap per run
                                 (default auto); close-knit: search budget
            family               scaling: cycle | line
            sizes                scaling: comma list, >= 4 increasing
            pilot                scaling: pick beta by the pilot rule
            r                    close-knit ratio / adversary threshold
            k                    close-knit set size
            horizon              adversary: steps per replica
            rounds               fairness: rounds to measure (>= 100)
            f                    fairness reference: nlogn | n | nsq

Outputs are CSV files in --out (trace, stationary, stable, closeknit,
inertia, scaling, adversary, fairness); every CSV ends with the line
"# normdyn <version>, config <hash>, seed <seed>".
Exit codes: 0 ok, 2 validation error, 3 capacity error, 4 all runs censored.
)";

struct CliArgs {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out_dir = ".";
};

CliArgs parse_args(int argc, char** argv) {
  CliArgs args;
  if (argc < 2) throw ValidationError("usage: normdyn <command> --config PATH (see --help)");
  args.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    const std::string flag = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) throw ValidationError("flag " + flag + " needs a value");
      return argv[++i];
    };
    if (flag == "--config") {
      args.config_path = value();
    } else if (flag == "--seed") {
      const std::string v = value();
      try {
        args.seed = std::stoull(v);
      } catch (const std::exception&) {
        throw ValidationError("--seed is not a nonnegative integer: " + v);
      }
      args.seed_set = true;
    } else if (flag == "--threads") {
      const std::string v = value();
      try {
        args.threads = std::stoi(v);
      } catch (const std::exception&) {
        throw ValidationError("--threads is not an integer: " + v);
      }
      if (args.threads < 1) throw ValidationError("--threads must be >= 1");
    } else if (flag == "--out") {
      args.out_dir = value();
    } else {
      throw ValidationError("unknown flag: " + flag);
    }
  }
  if (args.config_path.empty())
    throw ValidationError("missing --config PATH (see --help)");
  if (args.threads == 0) {
    const unsigned hc = std::thread::hardware_concurrency();
    args.threads = hc == 0 ? 1 : static_cast<int>(hc);
  }
  return args;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

struct GameSetup {
  PayoffMatrix payoff;
  ModelParams params;
};

GameSetup read_game(const RunConfig& cfg, bool beta_forbidden = false) {
  const double a = cfg.get_double("game", "a");
  const double b = cfg.get_double("game", "b");
  const double c = cfg.get_double("game", "c");
  const double d = cfg.get_double("game", "d");
  const bool allow = cfg.get_bool_or("game", "allow_non_potential", false);
  PayoffMatrix payoff(a, b, c, d, allow);
  if (beta_forbidden) {
    if (cfg.has("game", "beta"))
      throw ValidationError("config: game.beta conflicts with run.pilot = true");
    return {payoff, ModelParams::from_beta(0.0)};
  }
  return {payoff, ModelParams::from_beta(cfg.get_beta("game", "beta"))};
}

struct GraphSetup {
  WeightedGraph graph;
  std::optional<std::vector<std::vector<double>>> contagion_rows;
  std::string id;
};

GraphSetup read_graph(const RunConfig& cfg) {
  const std::string kind = cfg.get_string("graph", "kind");
  if (kind == "file") {
    const std::string path = cfg.get_string("graph", "path");
    GraphFile file = load_graph_file(path);
    return {std::move(file.graph), std::move(file.contagion_rows),
            std::filesystem::path(path).filename().string()};
  }
  const double w = cfg.get_double_or("graph", "weight", 1.0);
  if (kind == "cycle") {
    const int n = static_cast<int>(cfg.get_int("graph", "n"));
    return {WeightedGraph::cycle(n, w), std::nullopt, "C_" + std::to_string(n)};
  }
  if (kind == "line") {
    const int n = static_cast<int>(cfg.get_int("graph", "n"));
    return {WeightedGraph::line(n, w), std::nullopt, "L_" + std::to_string(n)};
  }
  if (kind == "complete") {
    const int n = static_cast<int>(cfg.get_int("graph", "n"));
    return {WeightedGraph::complete(n, w), std::nullopt, "K_" + std::to_string(n)};
  }
  if (kind == "grid") {
    const int rows = static_cast<int>(cfg.get_int("graph", "rows"));
    const int cols = static_cast<int>(cfg.get_int("graph", "cols"));
    return {WeightedGraph::grid(rows, cols, w), std::nullopt,
            "G_" + std::to_string(rows) + "x" + std::to_string(cols)};
  }
  throw ValidationError("config: graph.kind must be cycle|line|complete|grid|file, got '" +
                        kind + "'");
}

SchedulerSpec read_scheduler(const RunConfig& cfg, const GraphSetup& gs, std::string* id) {
  const std::string kind = cfg.get_string_or("scheduler", "kind", "random");
  if (id) *id = kind;
  const int n = gs.graph.vertex_count();
  SchedulerSpec spec = RandomScheduler{};
  if (kind == "random") {
    spec = RandomScheduler{};
  } else if (kind == "round-robin") {
    spec = round_robin(n);
  } else if (kind == "adversarial") {
    AdversarialScheduler adv;
    adv.r = cfg.get_double("scheduler", "r");
    adv.hammer_cap = static_cast<int>(cfg.get_int_or("scheduler", "hammer_cap", 10000));
    if (cfg.has("scheduler", "perm")) {
      adv.perm = cfg.get_int_list("scheduler", "perm");
    } else {
      adv.perm.resize(static_cast<std::size_t>(n));
      for (int v = 0; v < n; ++v) adv.perm[static_cast<std::size_t>(v)] = v;
    }
    spec = std::move(adv);
  } else if (kind == "contagion-uniform") {
    spec = contagion_uniform(gs.graph, static_cast<int>(cfg.get_int_or("scheduler", "start", 0)));
  } else if (kind == "contagion-thirds") {
    spec = contagion_thirds(
        gs.graph, static_cast<int>(cfg.get_int_or("scheduler", "start", (n - 1) / 2)));
  } else if (kind == "contagion-file") {
    if (!gs.contagion_rows)
      throw ValidationError("scheduler kind contagion-file needs a graph file with contagion rows");
    ContagionScheduler sched;
    for (const auto& row : *gs.contagion_rows) sched.rows.emplace_back(row);
    sched.start = static_cast<int>(cfg.get_int_or("scheduler", "start", 0));
    spec = std::move(sched);
  } else {
    throw ValidationError("config: scheduler.kind '" + kind + "' is not recognized");
  }
  validate_scheduler(spec, n);
  return spec;
}

std::uint64_t resolve_seed(const RunConfig& cfg, const CliArgs& args) {
  const std::uint64_t config_seed = cfg.get_uint_or("run", "seed", 1);
  return args.seed_set ? args.seed : config_seed;
}

class OutputFile {
 public:
  OutputFile(const CliArgs& args, const std::string& name, const RunConfig& cfg,
             std::uint64_t seed)
      : cfg_(cfg), seed_(seed) {
    std::filesystem::create_directories(args.out_dir);
    path_ = (std::filesystem::path(args.out_dir) / name).string();
    out_.open(path_, std::ios::binary);
    if (!out_) throw ValidationError("cannot open output file '" + path_ + "'");
  }

  ~OutputFile() { close(); }

  std::ostream& stream() { return out_; }
  const std::string& path() const { return path_; }

  void close() {
    if (!out_.is_open()) return;
    char buf[96];
    std::snprintf(buf, sizeof buf, "# normdyn %s, config %016llx, seed %llu\n", kVersion,
                  static_cast<unsigned long long>(cfg_.content_hash()),
                  static_cast<unsigned long long>(seed_));
    out_ << buf;
    out_.close();
  }

 private:
  const RunConfig& cfg_;
  std::uint64_t seed_;
  std::string path_;
  std::ofstream out_;
};

// Forwards records to the CSV sink while remembering the vertex sequence for
// round segmentation.
class TeeSink : public TraceSink {
 public:
  explicit TeeSink(TraceSink& inner) : inner_(inner) {}
  void record(const TraceRecord& rec) override {
    inner_.record(rec);
    vertices.push_back(rec.vertex);
  }
  TraceSink& inner_;
  std::vector<int> vertices;
};

int cmd_simulate(const RunConfig& cfg, const CliArgs& args) {
  const GameSetup game = read_game(cfg);
  const GraphSetup gs = read_graph(cfg);
  const SchedulerSpec spec = read_scheduler(cfg, gs, nullptr);
  const std::uint64_t seed = resolve_seed(cfg, args);
  const std::uint64_t steps = cfg.get_uint("run", "steps");
  if (steps == 0) throw ValidationError("config: run.steps must be >= 1");
  if (steps > 50000000ULL)
    throw CapacityError("run.steps above 5e7; use the library API for longer traces");
  const bool track_potential = cfg.get_bool_or("run", "track_potential", false);
  if (track_potential && !game.payoff.potential_game())
    throw ValidationError("run.track_potential needs a potential-game payoff (c = d)");
  const std::string start_key = cfg.get_string_or("run", "start", "all-b");
  Configuration start = Configuration::all_b(gs.graph.vertex_count());
  if (start_key == "all-a") {
    start = Configuration::all_a(gs.graph.vertex_count());
  } else if (start_key != "all-b") {
    start = Configuration::from_bitstring(start_key);
    if (start.size() != gs.graph.vertex_count())
      throw ValidationError("config: run.start bitstring length does not match the graph");
  }
  cfg.finish();

  OutputFile trace(args, "trace.csv", cfg, seed);
  CsvTraceSink csv(trace.stream());
  TeeSink tee(csv);
  const RunResult result = run(gs.graph, std::move(start), spec, game.params, game.payoff,
                               StepsRule{steps}, steps, seed, &tee, track_potential);
  trace.close();

  const RoundSegmentation rounds =
      segment_rounds(std::span<const int>(tee.vertices), gs.graph.vertex_count());
  const double frac =
      static_cast<double>(result.final_config.count_a()) / gs.graph.vertex_count();
  std::cout << "simulate: graph=" << gs.id << " steps=" << result.steps
            << " final_countA=" << result.final_config.count_a()
            << " final_fraction=" << fmtg(frac) << " rounds=" << rounds.lengths.size()
            << " trailing_steps=" << rounds.trailing << " cap_hits=" << result.hammer_cap_hits
            << "\n";
  return 0;
}

int cmd_exact_stationary(const RunConfig& cfg, const CliArgs& args) {
  const GameSetup game = read_game(cfg);
  const GraphSetup gs = read_graph(cfg);
  std::string sched_id;
  const SchedulerSpec spec = read_scheduler(cfg, gs, &sched_id);
  const std::uint64_t seed = resolve_seed(cfg, args);
  cfg.finish();

  ChainMatrix chain;
  if (std::holds_alternative<RandomScheduler>(spec)) {
    chain = build_chain_random(gs.graph, game.payoff, game.params);
  } else if (const auto* p = std::get_if<PeriodicScheduler>(&spec)) {
    chain = build_chain_periodic(gs.graph, game.payoff, game.params, *p);
  } else if (const auto* c = std::get_if<ContagionScheduler>(&spec)) {
    chain = build_chain_contagion(gs.graph, game.payoff, game.params, *c);
  } else {
    throw ValidationError("exact-stationary: the adaptive scheduler has no fixed kernel");
  }
  const Eigen::VectorXd mu = stationary(chain);

  const bool compare = game.payoff.potential_game() && !chain.contagion_space &&
                       !game.params.infinite();
  Eigen::VectorXd gb;
  double linf = 0.0;
  if (compare) {
    gb = gibbs(gs.graph, game.payoff, game.params.beta);
    linf = (mu - gb).cwiseAbs().maxCoeff();
  }

  OutputFile out(args, "stationary.csv", cfg, seed);
  out.stream() << (compare ? "state,label,probability,gibbs,absdiff\n"
                           : "state,label,probability\n");
  for (int s = 0; s < chain.state_count; ++s) {
    out.stream() << s << "," << chain.state_label(s) << "," << fmt(mu(s));
    if (compare) out.stream() << "," << fmt(gb(s)) << "," << fmt(std::abs(mu(s) - gb(s)));
    out.stream() << "\n";
  }
  out.close();

  std::cout << "exact-stationary: graph=" << gs.id << " scheduler=" << sched_id
            << " states=" << chain.state_count
            << " irreducible=" << (chain.irreducible ? "yes" : "no")
            << " aperiodic=" << (chain.aperiodic ? "yes" : "no");
  if (compare) {
    std::cout << " linf_vs_gibbs=" << fmtg(linf);
    if (std::holds_alternative<RandomScheduler>(spec)) {
      const DetailedBalanceReport db =
          detailed_balance_check(chain, gs.graph, game.payoff, game.params.beta);
      std::cout << " detailed_balance_violation=" << fmtg(db.violation)
                << " flipped_orientation_residual=" << fmtg(db.flipped_orientation_residual);
    }
  }
  std::cout << "\n";
  return 0;
}

int cmd_stable_states(const RunConfig& cfg, const CliArgs& args) {
  const GameSetup game = read_game(cfg);
  if (!game.payoff.potential_game())
    throw ValidationError("stable-states: needs a potential-game payoff (c = d)");
  const GraphSetup gs = read_graph(cfg);
  std::string sched_id;
  const SchedulerSpec spec = read_scheduler(cfg, gs, &sched_id);
  const std::uint64_t seed = resolve_seed(cfg, args);
  cfg.finish();

  const int n = gs.graph.vertex_count();
  ResistanceDigraph digraph;
  std::vector<int> predicted;
  if (std::holds_alternative<RandomScheduler>(spec)) {
    digraph = resistance_digraph_random(gs.graph, game.payoff);
    predicted = {(1 << n) - 1};
  } else if (const auto* p = std::get_if<PeriodicScheduler>(&spec)) {
    digraph = resistance_digraph_periodic(gs.graph, game.payoff, *p);
    predicted = {(1 << n) - 1};
  } else if (const auto* c = std::get_if<ContagionScheduler>(&spec)) {
    digraph = resistance_digraph_contagion(gs.graph, game.payoff, *c);
    for (int v = 0; v < n; ++v) predicted.push_back(((1 << n) - 1) * n + v);
  } else {
    throw ValidationError("stable-states: the adaptive scheduler has no fixed kernel");
  }
  const StableSetReport report = stable_states(digraph, predicted);

  OutputFile out(args, "stable.csv", cfg, seed);
  out.stream() << "state,label,root_resistance,stable\n";
  for (int s = 0; s < digraph.node_count; ++s) {
    const bool stable = std::binary_search(report.stable.begin(), report.stable.end(), s);
    out.stream() << s << "," << digraph.state_label(s) << ","
                 << fmt(report.root_resistance[static_cast<std::size_t>(s)]) << ","
                 << (stable ? 1 : 0) << "\n";
  }
  out.close();

  std::string labels;
  for (int s : report.stable) {
    if (!labels.empty()) labels += "|";
    labels += digraph.state_label(s);
  }
  std::cout << "stable-states: graph=" << gs.id << " scheduler=" << sched_id
            << " stable={" << labels << "} min_resistance=" << fmtg(report.min_resistance)
            << " matches_all_A=" << (report.matches_predicted ? "yes" : "no") << "\n";
  return 0;
}

int cmd_close_knit(const RunConfig& cfg, const CliArgs& args) {
  const GraphSetup gs = read_graph(cfg);
  const double r = cfg.get_double("run", "r");
  const int k = static_cast<int>(cfg.get_int("run", "k"));
  const long long budget = cfg.get_int_or("run", "budget", 1000000);
  const std::uint64_t seed = resolve_seed(cfg, args);
  cfg.finish();
  if (!(r > 0.0 && r < 1.0)) throw ValidationError("config: run.r must lie in (0,1)");
  if (k < 1) throw ValidationError("config: run.k must be >= 1");

  const RkCloseKnitResult result = is_rk_close_knit(gs.graph, r, k, budget);

  OutputFile out(args, "closeknit.csv", cfg, seed);
  out.stream() << "vertex,witness,ratio\n";
  if (result.verdict == Tri::Yes) {
    for (int v = 0; v < gs.graph.vertex_count(); ++v) {
      const auto& witness = result.witnesses[static_cast<std::size_t>(v)];
      std::string joined;
      for (int u : witness) {
        if (!joined.empty()) joined += ";";
        joined += std::to_string(u);
      }
      out.stream() << v << "," << joined << ","
                   << fmt(close_knit_ratio(gs.graph, witness).min_ratio) << "\n";
    }
  }
  out.close();

  std::cout << "close-knit: graph=" << gs.id << " r=" << fmtg(r) << " k=" << k << " verdict=";
  switch (result.verdict) {
    case Tri::Yes:
      std::cout << "yes";
      break;
    case Tri::No:
      std::cout << "no failing_vertex=" << *result.failing_vertex;
      break;
    case Tri::Indeterminate:
      std::cout << "indeterminate";
      break;
  }
  std::cout << " budget_exhausted=" << (result.budget_exhausted ? "yes" : "no") << "\n";
  return 0;
}

void write_inertia_rows(std::ostream& out, const std::string& family, int n,
                        const InertiaEstimate& est) {
  int index = 0;
  for (const auto& r : est.runs) {
    out << family << "," << n << "," << fmtg(est.beta) << "," << fmtg(est.p) << "," << index++
        << "," << r.steps << "," << (r.censored ? 1 : 0) << "\n";
  }
}

int cmd_inertia(const RunConfig& cfg, const CliArgs& args) {
  const GameSetup game = read_game(cfg);
  const GraphSetup gs = read_graph(cfg);
  const SchedulerSpec spec = read_scheduler(cfg, gs, nullptr);
  const std::uint64_t seed = resolve_seed(cfg, args);
  const double p = cfg.get_double("run", "p");
  const int replicas = static_cast<int>(cfg.get_int_or("run", "replicas", 50));
  const int random_starts = static_cast<int>(cfg.get_int_or("run", "random_starts", 0));
  const std::uint64_t budget = cfg.get_uint_or("run", "budget", 0);
  cfg.finish();

  const InertiaEstimate est = p_inertia_mc(gs.graph, game.payoff, game.params, spec, p,
                                           random_starts, replicas, budget, seed, args.threads,
                                           gs.id);

  OutputFile out(args, "inertia.csv", cfg, seed);
  out.stream() << "family,n,beta,p,replica,steps,censored\n";
  write_inertia_rows(out.stream(), gs.id, gs.graph.vertex_count(), est);
  out.close();

  std::cout << "inertia: graph=" << gs.id << " policy=\"" << est.start_policy
            << "\" replicas_per_start=" << est.replicas_per_start << " budget=" << est.budget
            << " mean_steps=" << fmtg(est.mean_steps) << " ci=" << fmtg(est.ci_halfwidth)
            << " all_b_mean=" << fmtg(est.all_b_mean) << " worst_start=" << est.worst_start
            << " censored=" << est.censored_runs << " usable=" << (est.usable ? "yes" : "no")
            << "\n";
  return est.usable ? 0 : 4;
}

int cmd_scaling(const RunConfig& cfg, const CliArgs& args) {
  const bool pilot = cfg.get_bool_or("run", "pilot", false);
  const GameSetup game = read_game(cfg, pilot);
  const std::string family = cfg.get_string("run", "family");
  const std::vector<int> sizes = cfg.get_int_list("run", "sizes");
  const double p = cfg.get_double("run", "p");
  const int replicas = static_cast<int>(cfg.get_int_or("run", "replicas", 50));
  const std::uint64_t budget = cfg.get_uint_or("run", "budget", 0);
  const std::string sched_kind = cfg.get_string_or("scheduler", "kind", "random");
  const std::uint64_t seed = resolve_seed(cfg, args);
  cfg.finish();

  std::function<WeightedGraph(int)> graph_of;
  std::function<SchedulerSpec(const WeightedGraph&)> sched_of;
  if (family == "cycle") {
    if (sched_kind != "random" && sched_kind != "round-robin")
      throw ValidationError("scaling family cycle supports scheduler random or round-robin");
    graph_of = [](int n) { return WeightedGraph::cycle(n); };
    sched_of = [&](const WeightedGraph& g) -> SchedulerSpec {
      if (sched_kind == "round-robin") return round_robin(g.vertex_count());
      return RandomScheduler{};
    };
  } else if (family == "line") {
    if (sched_kind != "contagion-thirds")
      throw ValidationError("scaling family line supports scheduler contagion-thirds only");
    graph_of = [](int n) { return WeightedGraph::line(n); };
    sched_of = [](const WeightedGraph& g) {
      return SchedulerSpec{contagion_thirds(g, (g.vertex_count() - 1) / 2)};
    };
  } else {
    throw ValidationError("config: run.family must be cycle or line, got '" + family + "'");
  }

  ModelParams params = game.params;
  std::string beta_source = "config";
  if (pilot) {
    const WeightedGraph g0 = graph_of(sizes.front());
    const PilotResult pr = pilot_beta(g0, game.payoff, sched_of(g0), p, budget,
                                      replica_seed(seed, 0x9110700ULL), 30, args.threads);
    params = ModelParams::from_beta(pr.beta);
    beta_source = "pilot";
  }

  const ScalingReport report = scaling_experiment(family, sizes, graph_of, sched_of, game.payoff,
                                                  params, p, replicas, budget, seed,
                                                  args.threads);

  OutputFile scal(args, "scaling.csv", cfg, seed);
  scal.stream() << "family,slope,stderr,intercept\n";
  scal.stream() << family << "," << fmt(report.slope) << "," << fmt(report.slope_stderr) << ","
                << fmt(report.intercept) << "\n";
  scal.close();

  OutputFile inert(args, "inertia.csv", cfg, seed);
  inert.stream() << "family,n,beta,p,replica,steps,censored\n";
  for (const auto& pt : report.points)
    write_inertia_rows(inert.stream(), family, pt.n, pt.estimate);
  inert.close();

  std::cout << "scaling: family=" << family << " sizes=" << sizes.size()
            << " beta=" << fmtg(params.beta) << " beta_source=" << beta_source
            << " slope=" << fmtg(report.slope) << " stderr=" << fmtg(report.slope_stderr)
            << " intercept=" << fmtg(report.intercept)
            << " censored=" << (report.any_censored ? "yes" : "no") << "\n";
  return 0;
}

int cmd_adversary(const RunConfig& cfg, const CliArgs& args) {
  const GameSetup game = read_game(cfg);
  const GraphSetup gs = read_graph(cfg);
  const double r = cfg.get_double("run", "r");
  const std::uint64_t horizon = cfg.get_uint("run", "horizon");
  const int replicas = static_cast<int>(cfg.get_int_or("run", "replicas", 50));
  const std::uint64_t seed = resolve_seed(cfg, args);
  cfg.finish();

  const AdversaryReport report = adversary_containment(gs.graph, game.payoff, game.params, r,
                                                       horizon, replicas, seed, args.threads);

  OutputFile out(args, "adversary.csv", cfg, seed);
  out.stream() << "replica,max_fraction,exceedances,cap_hits\n";
  for (std::size_t i = 0; i < report.per_replica.size(); ++i) {
    const auto& rep = report.per_replica[i];
    out.stream() << i << "," << fmt(rep.max_fraction) << "," << rep.exceedances << ","
                 << rep.cap_hits << "\n";
  }
  out.close();

  if (report.offending_replica >= 0) {
    OutputFile off(args, "offending.csv", cfg, seed);
    CsvTraceSink sink(off.stream());
    for (const auto& rec : report.offending_window) sink.record(rec);
    off.close();
  }

  std::cout << "adversary: graph=" << gs.id << " r=" << fmtg(r) << " horizon=" << horizon
            << " replicas=" << replicas << " max_fraction=" << fmtg(report.max_fraction)
            << " exceedance_steps=" << report.exceedance_steps
            << " total_steps=" << report.total_steps << " cap_hits=" << report.hammer_cap_hits;
  if (report.offending_replica >= 0)
    std::cout << " offending_replica=" << report.offending_replica
              << " first_exceedance_step=" << report.first_exceedance_step;
  else
    std::cout << " offending_replica=none";
  std::cout << "\n";
  return 0;
}

int cmd_fairness(const RunConfig& cfg, const CliArgs& args) {
  const GameSetup game = read_game(cfg);
  const GraphSetup gs = read_graph(cfg);
  std::string sched_id;
  const SchedulerSpec spec = read_scheduler(cfg, gs, &sched_id);
  const int rounds = static_cast<int>(cfg.get_int_or("run", "rounds", 100));
  const std::string f_kind = cfg.get_string_or("run", "f", "nlogn");
  const std::uint64_t seed = resolve_seed(cfg, args);
  cfg.finish();

  const double n = gs.graph.vertex_count();
  double f_n = 0.0;
  if (f_kind == "nlogn") {
    f_n = n * std::log(n);
  } else if (f_kind == "n") {
    f_n = n;
  } else if (f_kind == "nsq") {
    f_n = n * n;
  } else {
    throw ValidationError("config: run.f must be nlogn, n, or nsq");
  }

  const FairnessReport report =
      fairness_whp_estimate(gs.graph, game.payoff, game.params, spec, f_n, rounds, seed);

  OutputFile out(args, "fairness.csv", cfg, seed);
  out.stream() << "round,length\n";
  for (std::size_t i = 0; i < report.round_lengths.size(); ++i)
    out.stream() << (i + 1) << "," << report.round_lengths[i] << "\n";
  out.close();

  std::cout << "fairness: graph=" << gs.id << " scheduler=" << sched_id
            << " rounds=" << report.round_lengths.size() << " f=" << f_kind << "("
            << fmtg(f_n) << ")"
            << " c_hat=" << fmtg(report.c_hat) << " ghat1=" << fmtg(report.ghat[0])
            << " ghat2=" << fmtg(report.ghat[1]) << " ghat4=" << fmtg(report.ghat[2])
            << " ghat8=" << fmtg(report.ghat[3]) << " trailing=" << report.trailing
            << " total_steps=" << report.total_steps << " cap_hits=" << report.hammer_cap_hits
            << "\n";
  return 0;
}

int dispatch(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--help") == 0 || std::strcmp(argv[i], "-h") == 0) {
      std::cout << kHelp;
      return 0;
    }
  }
  const CliArgs args = parse_args(argc, argv);
  const RunConfig cfg = RunConfig::parse_file(args.config_path);
  if (args.command == "simulate") return cmd_simulate(cfg, args);
  if (args.command == "exact-stationary") return cmd_exact_stationary(cfg, args);
  if (args.command == "stable-states") return cmd_stable_states(cfg, args);
  if (args.command == "close-knit") return cmd_close_knit(cfg, args);
  if (args.command == "inertia") return cmd_inertia(cfg, args);
  if (args.command == "scaling") return cmd_scaling(cfg, args);
  if (args.command == "adversary") return cmd_adversary(cfg, args);
  if (args.command == "fairness") return cmd_fairness(cfg, args);
  throw ValidationError("unknown command '" + args.command + "' (see --help)");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
