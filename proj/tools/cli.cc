#include "cli.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "greennet/controller.h"
#include "greennet/errors.h"
#include "greennet/io.h"
#include "greennet/lagrangian.h"
#include "greennet/oracle.h"

namespace greennet {
namespace {

namespace fs = std::filesystem;

// Raised when an emitted plan fails validation or a solver contract breaks.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string topology;
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

void write_json(const fs::path& path, const Json& json) {
  write_text_file(path, json.dump(2) + "\n");
}

SolverConfig load_config_with_seed(const Common& common) {
  SolverConfig cfg =
      common.config.empty() ? SolverConfig{} : load_config(common.config);
  if (common.seed) cfg.seed = *common.seed;
  return cfg;
}

std::vector<Violation> check_plan(const NetworkPlan& plan,
                                  const Topology& topology,
                                  std::span<const Session> sessions,
                                  bool allow_drop) {
  return validate_plan(plan, topology, sessions,
                       flows_from_plan(plan, topology),
                       ValidationOptions{allow_drop, kFeasibilityTolerance});
}

void require_valid(const std::vector<Violation>& violations,
                   const std::string& what) {
  if (violations.empty()) return;
  throw InvariantError(what + ": " + std::to_string(violations.size()) +
                       " constraint violation(s), first: " +
                       violations.front().message);
}

void prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError(dir + ": cannot create directory");
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

struct SolveOptions {
  Common common;
  std::string demand;
  std::string solver = "lagrangian";
  bool iterations = false;
};

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
  const Topology topology = load_topology(opt.common.topology);
  const std::vector<Session> sessions = load_demand(opt.demand, topology);
  const SolverConfig cfg = load_config_with_seed(opt.common);
  prepare_out(opt.common.out);

  NetworkPlan plan;
  if (opt.solver == "oracle") {
    plan = solve_exact(topology, sessions, cfg).plan;
  } else {
    LagrangianResult result = solve_lagrangian(topology, sessions, cfg);
    if (opt.iterations) {
      write_text_file(fs::path(opt.common.out) / "iterations.csv",
                      trace_to_csv(result.trace));
    }
    if (!result.plan) throw InfeasibleError("no feasible plan found");
    plan = std::move(*result.plan);
  }

  const auto violations = check_plan(plan, topology, sessions, cfg.allow_drop);
  const fs::path dir(opt.common.out);
  write_json(dir / "plan.json", plan_to_json(plan, topology, sessions));
  write_json(dir / "objective.json", objective_to_json(plan.objective));
  write_json(dir / "validation.json", violations_to_json(violations));
  require_valid(violations, "emitted plan");

  out << "solver=" << opt.solver
      << " objective=" << format_double(plan.objective.combined)
      << " energy=" << format_double(plan.objective.energy_sum)
      << " utility=" << format_double(plan.objective.utility_sum)
      << " active_links=" << plan.active_links.size() << "\n";
  return kExitOk;
}

struct CompareOptions {
  Common common;
  std::string demand;
  std::size_t trials = 1;
  bool timings = false;
};

// Capacities and energies scaled independently by a factor in [0.75, 1.25).
Topology perturb(const Topology& topology, std::mt19937_64& rng) {
  auto factor = [&] {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 1.0 + 0.25 * (2.0 * u - 1.0);
  };
  std::vector<Link> links = topology.links();
  for (Link& link : links) {
    link.capacity *= factor();
    link.energy *= factor();
  }
  return Topology(topology.nodes(), std::move(links));
}

int cmd_compare(const CompareOptions& opt, std::ostream& out) {
  const Topology base = load_topology(opt.common.topology);
  const std::vector<Session> sessions = load_demand(opt.demand, base);
  const SolverConfig cfg = load_config_with_seed(opt.common);
  prepare_out(opt.common.out);

  std::ostringstream csv;
  csv << "instance,oracle,heuristic,gap,oracle_lp_solves,heuristic_iterations";
  if (opt.timings) csv << ",oracle_ms,heuristic_ms";
  csv << "\n";

  std::mt19937_64 rng(cfg.seed);
  double max_gap = 0, gap_sum = 0;
  std::size_t compared = 0;
  std::optional<std::string> broken;
  for (std::size_t trial = 0; trial < opt.trials; ++trial) {
    const Topology topology = trial == 0 ? base : perturb(base, rng);

    auto start = std::chrono::steady_clock::now();
    std::optional<OracleResult> exact;
    try {
      exact = solve_exact(topology, sessions, cfg);
    } catch (const InfeasibleError&) {
    }
    const double oracle_ms = elapsed_ms(start);

    start = std::chrono::steady_clock::now();
    LagrangianResult heuristic = solve_lagrangian(topology, sessions, cfg);
    const double heuristic_ms = elapsed_ms(start);

    if (exact) {
      require_valid(check_plan(exact->plan, topology, sessions, cfg.allow_drop),
                    "oracle plan, instance " + std::to_string(trial));
    }
    if (heuristic.plan) {
      require_valid(
          check_plan(*heuristic.plan, topology, sessions, cfg.allow_drop),
          "heuristic plan, instance " + std::to_string(trial));
    }

    csv << trial << ','
        << (exact ? format_double(exact->optimum) : "infeasible") << ','
        << (heuristic.plan ? format_double(heuristic.plan->objective.combined)
                           : "none")
        << ',';
    if (exact && heuristic.plan) {
      const double gap = heuristic.plan->objective.combined - exact->optimum;
      csv << format_double(gap);
      max_gap = compared == 0 ? gap : std::max(max_gap, gap);
      gap_sum += gap;
      ++compared;
      if (gap < -1e-6 && !broken) {
        broken = "instance " + std::to_string(trial) +
                 ": heuristic beats the exact optimum by " +
                 format_double(-gap);
      }
    }
    csv << ',' << (exact ? exact->lp_solves : 0) << ','
        << heuristic.state.iteration;
    if (opt.timings) {
      csv << ',' << format_double(oracle_ms) << ','
          << format_double(heuristic_ms);
    }
    csv << "\n";
  }
  write_text_file(fs::path(opt.common.out) / "compare.csv", csv.str());
  if (broken) throw InvariantError(*broken);

  out << "trials=" << opt.trials << " compared=" << compared
      << " mean_gap=" << format_double(compared ? gap_sum / compared : 0.0)
      << " max_gap=" << format_double(max_gap) << "\n";
  return kExitOk;
}

struct SimulateOptions {
  Common common;
  std::string trace;
  std::string solver = "lagrangian";
  TraceParams params;
  std::string ladder;
};

std::vector<double> parse_ladder(const std::string& text) {
  std::vector<double> ladder;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      ladder.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("--ladder: '" + item + "' is not a number");
    }
  }
  if (ladder.empty()) throw InputError("--ladder: empty");
  return ladder;
}

int cmd_simulate(SimulateOptions opt, std::ostream& out) {
  const Topology topology = load_topology(opt.common.topology);
  const SolverConfig cfg = load_config_with_seed(opt.common);
  const SolverKind solver = *parse_solver_kind(opt.solver);
  prepare_out(opt.common.out);
  const fs::path dir(opt.common.out);

  EpochTrace trace;
  if (!opt.trace.empty()) {
    trace = load_trace(opt.trace, topology);
  } else {
    if (!opt.ladder.empty()) opt.params.ladder = parse_ladder(opt.ladder);
    opt.params.seed = cfg.seed;
    trace = generate_trace(topology, opt.params);
    write_json(dir / "trace.json", trace_to_json(trace, topology));
  }

  const auto results = run_simulation(topology, trace, cfg, solver);
  write_json(dir / "orders.json", orders_to_json(results, topology));
  write_text_file(dir / "telemetry.csv", telemetry_to_csv(results));

  double energy = 0, utility = 0;
  std::size_t retained = 0;
  for (const EpochResult& r : results) {
    const std::string what = "epoch " + std::to_string(r.order.epoch);
    require_valid(check_plan(r.plan, topology, r.sessions,
                             cfg.allow_drop || r.order.retained),
                  what);
    for (const auto& [id, replayed] : replay(topology, r.order, r.sessions)) {
      if (replayed.loop || replayed.blackhole ||
          std::abs(replayed.delivered - 1.0) > 1e-9) {
        throw InvariantError(what + ": routing tables do not deliver session '" +
                             id + "'");
      }
    }
    energy += r.telemetry.energy_total;
    utility += r.telemetry.utility_total;
    retained += r.order.retained ? 1 : 0;
  }
  out << "epochs=" << results.size() << " energy=" << format_double(energy)
      << " utility=" << format_double(utility) << " retained=" << retained
      << "\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--topology", common.topology, "Topology JSON")->required();
  cmd->add_option("--config", common.config, "Solver config JSON");
  cmd->add_option("--out", common.out, "Output directory");
  cmd->add_option("--seed", common.seed, "Overrides the config seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Energy-aware routing and rate selection"};
  app.require_subcommand(1);

  SolveOptions solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  add_common(solve_cmd, solve.common);
  solve_cmd->add_option("--demand", solve.demand, "Demand JSON")->required();
  solve_cmd->add_option("--solver", solve.solver)
      ->check(CLI::IsMember({"oracle", "lagrangian"}));
  solve_cmd->add_flag("--iterations", solve.iterations,
                      "Write iterations.csv (lagrangian only)");

  CompareOptions compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Oracle against heuristic on perturbations");
  add_common(compare_cmd, compare.common);
  compare_cmd->add_option("--demand", compare.demand, "Demand JSON")
      ->required();
  compare_cmd->add_option("--trials", compare.trials);
  compare_cmd->add_flag("--timings", compare.timings,
                        "Add wall-clock columns to compare.csv");

  SimulateOptions simulate;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "Run the epoch controller");
  add_common(simulate_cmd, simulate.common);
  simulate_cmd->add_option("--trace", simulate.trace,
                           "Trace JSON; generated when absent");
  simulate_cmd->add_option("--solver", simulate.solver)
      ->check(CLI::IsMember({"oracle", "lagrangian"}));
  simulate_cmd->add_option("--epochs", simulate.params.num_epochs);
  simulate_cmd->add_option("--arrival-rate", simulate.params.arrival_rate);
  simulate_cmd->add_option("--mean-holding",
                           simulate.params.mean_holding_epochs);
  simulate_cmd->add_option("--duration", simulate.params.duration);
  simulate_cmd->add_option("--ladder", simulate.ladder,
                           "Comma-separated rates");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, out);
    if (compare_cmd->parsed()) return cmd_compare(compare, out);
    return cmd_simulate(simulate, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InstanceTooLargeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const InvariantError& e) {
    err << "invariant violated: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace greennet
