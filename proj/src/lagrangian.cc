#include "greennet/lagrangian.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "greennet/graph_util.h"
#include "greennet/io.h"
#include "greennet/lp.h"

namespace greennet {
namespace {

constexpr double kZero = 1e-12;

struct Weights {
  double utility;  // weight of U in the objective
  double energy;   // weight of link energy
};

Weights weights_for(const SolverConfig& cfg) {
  if (cfg.mode == ObjectiveMode::kJoint) return {cfg.alpha, cfg.beta};
  return {0.0, 1.0};
}

// Ladder rungs a session may be assigned (ignoring the drop option).
std::vector<double> admissible_rates(const Session& session,
                                     const SolverConfig& cfg) {
  std::vector<double> rates;
  for (double q : session.rates) {
    if (cfg.mode == ObjectiveMode::kConstrained &&
        utility_eval(session.utility, q) < cfg.u_floor) {
      continue;
    }
    rates.push_back(q);
  }
  if (rates.empty() && !cfg.allow_drop) rates = session.rates;
  return rates;
}

bool strictly_exceeds(double reward, double cost) {
  return reward > cost + kZero * std::max(1.0, std::abs(cost));
}

// Sessions by descending multiplier, ties by id.
std::vector<SessionIndex> greedy_order(std::span<const Session> sessions,
                                       std::span<const double> lambda) {
  std::vector<SessionIndex> order(sessions.size());
  std::iota(order.begin(), order.end(), SessionIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](SessionIndex a, SessionIndex b) {
                     if (lambda[a] != lambda[b]) return lambda[a] > lambda[b];
                     return sessions[a].id < sessions[b].id;
                   });
  return order;
}

double largest_rung_at_most(std::span<const double> rungs, double cap) {
  double best = 0;
  for (double q : rungs) {
    if (q <= cap + kZero) best = q;
  }
  return best;
}

void finish_subproblem1(const Topology& topology,
                        std::span<const Session> sessions,
                        std::span<const double> lambda, double energy_weight,
                        Subproblem1Result& result) {
  result.active_links.clear();
  for (LinkIndex link = 0; link < topology.num_links(); ++link) {
    if (result.flows.link_load(link) > 0) result.active_links.push_back(link);
  }
  result.delivered.assign(sessions.size(), 0.0);
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    double net = 0;
    for (LinkIndex link : topology.out_links(sessions[k].source)) {
      net += result.flows.at(link, k);
    }
    for (LinkIndex link : topology.in_links(sessions[k].source)) {
      net -= result.flows.at(link, k);
    }
    result.delivered[k] = net;
    result.flows.rates()[k] = net;
  }
  result.value = energy_weight * topology.energy_of(result.active_links);
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    result.value -= lambda[k] * result.delivered[k];
  }
}

// Single-path router used by primal recovery.
class Router {
 public:
  Router(const Topology& topology, std::span<const Session> sessions,
         std::span<const LinkIndex> opened, const SolverConfig& cfg)
      : topology_(topology),
        sessions_(sessions),
        cfg_(cfg),
        energy_weight_(weights_for(cfg).energy),
        residual_(topology.num_links()),
        opened_(topology.num_links(), false),
        paths_(sessions.size()),
        rates_(sessions.size(), 0.0),
        capacity_(sessions.size(), 0.0) {
    for (LinkIndex link = 0; link < topology.num_links(); ++link) {
      residual_[link] = topology.link(link).capacity;
    }
    for (LinkIndex link : opened) opened_[link] = true;
    for (const Session& s : sessions) rungs_.push_back(admissible_rates(s, cfg));
  }

  const std::vector<double>& rungs(SessionIndex k) const { return rungs_[k]; }
  double rate(SessionIndex k) const { return rates_[k]; }
  const std::vector<LinkIndex>& path(SessionIndex k) const { return paths_[k]; }

  // Path for session k able to carry at least `need`: opened links first,
  // then the cheapest set of links to open.
  std::optional<std::vector<LinkIndex>> find_path(SessionIndex k,
                                                  double need) const {
    const Session& s = sessions_[k];
    auto fits = [&](LinkIndex link) { return residual_[link] + kZero >= need; };
    auto path = shortest_hop_path(topology_, s.source, s.destination,
                                  [&](LinkIndex link) {
                                    return opened_[link] && fits(link) &&
                                           residual_[link] > kZero;
                                  });
    if (path) return path;
    return cheapest_path(topology_, s.source, s.destination,
                         [&](LinkIndex link) -> std::optional<double> {
                           if (!fits(link) || residual_[link] <= kZero) {
                             return std::nullopt;
                           }
                           if (opened_[link]) return 0.0;
                           return energy_weight_ * topology_.link(link).energy;
                         });
  }

  // Cheapest path carrying `need`, where only links without load cost energy.
  std::optional<std::vector<LinkIndex>> find_reroute(SessionIndex k,
                                                     double need) const {
    const Session& s = sessions_[k];
    return cheapest_path(topology_, s.source, s.destination,
                         [&](LinkIndex link) -> std::optional<double> {
                           if (residual_[link] + kZero < need) {
                             return std::nullopt;
                           }
                           const Link& l = topology_.link(link);
                           if (l.capacity - residual_[link] > kZero) return 0.0;
                           return energy_weight_ * l.energy;
                         });
  }

  double path_bottleneck(const std::vector<LinkIndex>& path) const {
    return bottleneck(path, residual_);
  }

  void assign(SessionIndex k, std::vector<LinkIndex> path, double rate,
              double capacity) {
    for (LinkIndex link : path) {
      opened_[link] = true;
      residual_[link] -= rate;
    }
    paths_[k] = std::move(path);
    rates_[k] = rate;
    capacity_[k] = capacity;
  }

  // Changes the rate of an already routed session.
  void resize(SessionIndex k, double rate, double capacity) {
    for (LinkIndex link : paths_[k]) residual_[link] += rates_[k] - rate;
    rates_[k] = rate;
    capacity_[k] = capacity;
  }

  void drop(SessionIndex k) {
    for (LinkIndex link : paths_[k]) residual_[link] += rates_[k];
    paths_[k].clear();
    rates_[k] = 0;
    capacity_[k] = 0;
  }

  RecoveryResult result() const {
    RecoveryResult out;
    out.plan = empty_plan(sessions_.size());
    for (SessionIndex k = 0; k < sessions_.size(); ++k) {
      out.plan.rates[k] = rates_[k];
      if (rates_[k] > 0) out.plan.routes[k].push_back({paths_[k], rates_[k]});
    }
    prune_inactive_links(out.plan, topology_);
    out.plan.objective =
        evaluate_objective(topology_, out.plan, sessions_, cfg_);
    out.delivered_capacity = capacity_;
    return out;
  }

 private:
  const Topology& topology_;
  std::span<const Session> sessions_;
  const SolverConfig& cfg_;
  double energy_weight_;
  std::vector<double> residual_;
  std::vector<bool> opened_;
  std::vector<std::vector<double>> rungs_;
  std::vector<std::vector<LinkIndex>> paths_;
  std::vector<double> rates_;
  std::vector<double> capacity_;
};

enum class RecoveryVariant {
  kBottleneck,   // rate limited by the path bottleneck
  kSubproblem,   // additionally limited by what the flow sub-problem delivered
  kFloorFirst,   // everyone at the lowest rung first, then upgrade
};

bool route_session(Router& router, SessionIndex k, double cap_limit) {
  const auto& rungs = router.rungs(k);
  if (rungs.empty()) return false;
  auto path = router.find_path(k, rungs.front());
  if (!path) return false;
  double capacity = std::min(router.path_bottleneck(*path), cap_limit);
  double rate = largest_rung_at_most(rungs, capacity);
  if (rate == 0) return false;
  router.assign(k, std::move(*path), rate, capacity);
  return true;
}

// Moves single sessions to other paths and rungs while that strictly
// improves the objective.
void reroute_sessions(Router& router, std::span<const SessionIndex> order) {
  for (int pass = 0; pass < 3; ++pass) {
    bool improved = false;
    for (SessionIndex k : order) {
      const double rate = router.rate(k);
      if (rate == 0) continue;
      const RecoveryResult before = router.result();
      std::vector<LinkIndex> path = router.path(k);
      const double capacity = before.delivered_capacity[k];
      router.drop(k);
      bool moved = false;
      const auto& rungs = router.rungs(k);
      for (auto q = rungs.rbegin(); q != rungs.rend() && *q >= rate; ++q) {
        auto candidate = router.find_reroute(k, *q);
        if (!candidate || *candidate == path) continue;
        const double room = router.path_bottleneck(*candidate);
        router.assign(k, std::move(*candidate),
                      largest_rung_at_most(rungs, room), room);
        if (router.result().plan.objective.combined <
            before.plan.objective.combined - kZero) {
          moved = true;
          break;
        }
        router.drop(k);
      }
      if (moved) {
        improved = true;
      } else {
        router.assign(k, std::move(path), rate, capacity);
      }
    }
    if (!improved) break;
  }
}

// Drops sessions whose utility does not pay for the links only they use.
void drop_unprofitable(Router& router, std::span<const Session> sessions,
                       std::span<const SessionIndex> order) {
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    SessionIndex k = *it;
    if (router.rate(k) == 0) continue;
    RecoveryResult before = router.result();
    double rate = router.rate(k);
    std::vector<LinkIndex> path = router.path(k);
    double capacity = before.delivered_capacity[k];
    router.drop(k);
    RecoveryResult after = router.result();
    double gain = before.plan.objective.combined - after.plan.objective.combined;
    bool keep_dropped =
        gain > kZero || (std::abs(gain) <= kZero &&
                         after.plan.objective.energy_sum <
                             before.plan.objective.energy_sum - kZero);
    if (!keep_dropped) router.assign(k, std::move(path), rate, capacity);
  }
  (void)sessions;
}

std::optional<RecoveryResult> recover_variant(
    RecoveryVariant variant, const Topology& topology,
    std::span<const Session> sessions, std::span<const LinkIndex> opened,
    std::span<const SessionIndex> order, std::span<const double> target_rates,
    std::span<const double> delivered, const SolverConfig& cfg) {
  Router router(topology, sessions, opened, cfg);
  constexpr double kNoLimit = std::numeric_limits<double>::infinity();

  for (SessionIndex k : order) {
    if (cfg.allow_drop && target_rates[k] == 0) continue;
    double limit = kNoLimit;
    if (variant == RecoveryVariant::kSubproblem && delivered[k] > kZero) {
      limit = std::max(delivered[k], router.rungs(k).empty()
                                         ? 0.0
                                         : router.rungs(k).front());
    } else if (variant == RecoveryVariant::kFloorFirst &&
               !router.rungs(k).empty()) {
      limit = router.rungs(k).front();
    }
    if (!route_session(router, k, limit) && !cfg.allow_drop) {
      return std::nullopt;
    }
  }

  if (variant == RecoveryVariant::kFloorFirst) {
    for (SessionIndex k : order) {
      if (router.rate(k) == 0) continue;
      double capacity =
          router.path_bottleneck(router.path(k)) + router.rate(k);
      router.resize(k, largest_rung_at_most(router.rungs(k), capacity),
                    capacity);
    }
  }

  reroute_sessions(router, order);
  if (cfg.allow_drop) drop_unprofitable(router, sessions, order);
  return router.result();
}

}  // namespace

double initial_lambda(const Topology& topology, const SolverConfig& cfg) {
  if (cfg.subgradient.lambda_init) return *cfg.subgradient.lambda_init;
  if (topology.num_links() == 0) return 0.0;
  double energy = 0, capacity = 0;
  for (const Link& link : topology.links()) {
    energy += link.energy;
    capacity += link.capacity;
  }
  return weights_for(cfg).energy * energy / capacity;
}

std::vector<double> subproblem2_rates(std::span<const Session> sessions,
                                      std::span<const double> lambda,
                                      const SolverConfig& cfg) {
  const Weights w = weights_for(cfg);
  std::vector<double> rates(sessions.size(), 0.0);
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    std::vector<double> options = admissible_rates(sessions[k], cfg);
    if (cfg.allow_drop) options.insert(options.begin(), 0.0);
    std::optional<double> best_value;
    for (double r : options) {
      double value = -w.utility * utility_eval(sessions[k].utility, r) +
                     lambda[k] * r;
      if (!best_value ||
          value < *best_value - kZero * std::max(1.0, std::abs(*best_value))) {
        best_value = value;
        rates[k] = r;
      }
    }
  }
  return rates;
}

double subproblem2_value(std::span<const Session> sessions,
                         std::span<const double> lambda,
                         std::span<const double> rates,
                         const SolverConfig& cfg) {
  const Weights w = weights_for(cfg);
  double value = 0;
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    value += -w.utility * utility_eval(sessions[k].utility, rates[k]) +
             lambda[k] * rates[k];
  }
  return value;
}

std::vector<double> subproblem2_rates_relaxed(std::span<const Session> sessions,
                                              std::span<const double> lambda,
                                              const SolverConfig& cfg) {
  const Weights w = weights_for(cfg);
  std::vector<double> rates(sessions.size(), 0.0);
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    std::vector<double> rungs = admissible_rates(sessions[k], cfg);
    if (rungs.empty()) continue;
    double lo = cfg.allow_drop ? 0.0 : rungs.front();
    double hi = rungs.back();
    auto f = [&](double r) {
      return -w.utility * utility_eval(sessions[k].utility, r) + lambda[k] * r;
    };
    // f is convex on [lo, hi]; ternary search for its minimizer.
    for (int i = 0; i < 200; ++i) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (f(m1) <= f(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    double relaxed = 0.5 * (lo + hi);
    double rounded = largest_rung_at_most(rungs, relaxed + 1e-9);
    if (rounded == 0 && !cfg.allow_drop) rounded = rungs.front();
    rates[k] = rounded;
  }
  return rates;
}

Subproblem1Result subproblem1_flows(const Topology& topology,
                                    std::span<const Session> sessions,
                                    std::span<const double> lambda,
                                    const SolverConfig& cfg) {
  const double energy_weight = weights_for(cfg).energy;
  Subproblem1Result result;
  result.flows = FlowAssignment(topology.num_links(), sessions.size());
  std::vector<double> residual(topology.num_links());
  std::vector<bool> opened(topology.num_links(), false);
  for (LinkIndex link = 0; link < topology.num_links(); ++link) {
    residual[link] = topology.link(link).capacity;
  }

  for (SessionIndex k : greedy_order(sessions, lambda)) {
    if (lambda[k] <= 0) continue;
    const Session& s = sessions[k];
    auto path = cheapest_path(
        topology, s.source, s.destination,
        [&](LinkIndex link) -> std::optional<double> {
          if (residual[link] <= kZero) return std::nullopt;
          return opened[link] ? 0.0 : energy_weight * topology.link(link).energy;
        });
    if (!path) continue;
    double flow = std::min(bottleneck(*path, residual), s.max_rate());
    double opening_cost = 0;
    for (LinkIndex link : *path) {
      if (!opened[link]) opening_cost += energy_weight * topology.link(link).energy;
    }
    if (!strictly_exceeds(lambda[k] * flow, opening_cost)) continue;
    for (LinkIndex link : *path) {
      opened[link] = true;
      residual[link] -= flow;
      result.flows.at(link, k) += flow;
    }
  }
  finish_subproblem1(topology, sessions, lambda, energy_weight, result);
  return result;
}

Subproblem1Result exact_subproblem1(const Topology& topology,
                                    std::span<const Session> sessions,
                                    std::span<const double> lambda,
                                    const SolverConfig& cfg,
                                    const OracleLimits& limits) {
  const std::size_t num_links = topology.num_links();
  if (num_links > limits.max_links || num_links >= 63) {
    throw InstanceTooLargeError("exact flow sub-problem: " +
                                std::to_string(num_links) +
                                " links exceed the limit of " +
                                std::to_string(limits.max_links));
  }
  const double energy_weight = weights_for(cfg).energy;
  using Mask = std::uint64_t;
  const Mask num_masks = Mask{1} << num_links;

  std::vector<std::pair<double, Mask>> subsets;
  subsets.reserve(num_masks);
  for (Mask mask = 0; mask < num_masks; ++mask) {
    double energy = 0;
    for (LinkIndex link = 0; link < num_links; ++link) {
      if ((mask >> link) & 1) energy += topology.link(link).energy;
    }
    subsets.emplace_back(energy, mask);
  }
  std::sort(subsets.begin(), subsets.end());

  std::vector<SessionIndex> rewarded;
  double reward_bound = 0;
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    if (lambda[k] > 0) {
      rewarded.push_back(k);
      reward_bound += lambda[k] * sessions[k].max_rate();
    }
  }

  double best_value = 0;  // empty subset
  FlowAssignment best_flows(num_links, sessions.size());

  for (const auto& [energy, mask] : subsets) {
    if (mask == 0) continue;
    if (energy_weight * energy - reward_bound > best_value + kZero) break;
    auto in_mask = [&](LinkIndex link) { return ((mask >> link) & 1) != 0; };
    bool any_path = false;
    for (SessionIndex k : rewarded) {
      any_path = any_path || reachable(topology, sessions[k].source,
                                       sessions[k].destination, in_mask);
    }
    if (!any_path) continue;

    std::vector<LinkIndex> links;
    for (LinkIndex link = 0; link < num_links; ++link) {
      if (in_mask(link)) links.push_back(link);
    }
    std::vector<std::ptrdiff_t> position(num_links, -1);
    for (std::size_t i = 0; i < links.size(); ++i) {
      position[links[i]] = static_cast<std::ptrdiff_t>(i);
    }
    const std::size_t r = rewarded.size();
    auto var = [&](LinkIndex link, std::size_t j) {
      return static_cast<std::size_t>(position[link]) * r + j;
    };

    lp::LinearProgram program;
    for (std::size_t i = 0; i < links.size() * r; ++i) program.add_variable(0.0);
    const std::size_t n = program.num_variables();
    for (std::size_t j = 0; j < r; ++j) {
      const Session& s = sessions[rewarded[j]];
      for (LinkIndex link : topology.out_links(s.source)) {
        if (in_mask(link)) program.objective[var(link, j)] -= lambda[rewarded[j]];
      }
      for (LinkIndex link : topology.in_links(s.source)) {
        if (in_mask(link)) program.objective[var(link, j)] += lambda[rewarded[j]];
      }
    }
    for (LinkIndex link : links) {
      std::vector<double> row(n, 0.0);
      for (std::size_t j = 0; j < r; ++j) row[var(link, j)] = 1.0;
      program.add_constraint(std::move(row), lp::RowSense::kLessEqual,
                             topology.link(link).capacity);
    }
    for (std::size_t j = 0; j < r; ++j) {
      const Session& s = sessions[rewarded[j]];
      for (NodeIndex v = 0; v < topology.num_nodes(); ++v) {
        if (v == s.destination) continue;
        std::vector<double> row(n, 0.0);
        bool touched = false;
        for (LinkIndex link : topology.out_links(v)) {
          if (in_mask(link)) row[var(link, j)] += 1.0, touched = true;
        }
        for (LinkIndex link : topology.in_links(v)) {
          if (in_mask(link)) row[var(link, j)] -= 1.0, touched = true;
        }
        if (!touched) continue;
        if (v == s.source) {
          program.add_constraint(std::move(row), lp::RowSense::kLessEqual,
                                 s.max_rate());
        } else {
          program.add_constraint(std::move(row), lp::RowSense::kEqual, 0.0);
        }
      }
    }

    lp::LpSolution solution = lp::solve_lp(program);
    if (solution.status != lp::LpStatus::kOptimal) continue;
    double value = energy_weight * energy + solution.objective;
    if (value < best_value - kZero) {
      best_value = value;
      best_flows = FlowAssignment(num_links, sessions.size());
      for (LinkIndex link : links) {
        for (std::size_t j = 0; j < r; ++j) {
          double f = solution.values[var(link, j)];
          best_flows.at(link, rewarded[j]) = f > kZero ? f : 0.0;
        }
      }
    }
  }

  Subproblem1Result result;
  result.flows = std::move(best_flows);
  finish_subproblem1(topology, sessions, lambda, energy_weight, result);
  return result;
}

std::optional<RecoveryResult> recover_primal(
    const Topology& topology, std::span<const Session> sessions,
    std::span<const LinkIndex> opened, std::span<const double> lambda,
    std::span<const double> target_rates, std::span<const double> delivered,
    const SolverConfig& cfg) {
  const auto order = greedy_order(sessions, lambda);
  std::optional<RecoveryResult> best;
  for (RecoveryVariant variant :
       {RecoveryVariant::kBottleneck, RecoveryVariant::kSubproblem,
        RecoveryVariant::kFloorFirst}) {
    auto candidate = recover_variant(variant, topology, sessions, opened,
                                     order, target_rates, delivered, cfg);
    if (!candidate) continue;
    if (cfg.mode == ObjectiveMode::kConstrained &&
        !std::isfinite(candidate->plan.objective.combined)) {
      continue;
    }
    if (!best ||
        candidate->plan.objective.combined <
            best->plan.objective.combined - kZero ||
        (std::abs(candidate->plan.objective.combined -
                  best->plan.objective.combined) <= kZero &&
         candidate->plan.objective.energy_sum <
             best->plan.objective.energy_sum - kZero)) {
      best = std::move(candidate);
    }
  }
  return best;
}

LagrangianResult solve_lagrangian(const Topology& topology,
                                  std::span<const Session> sessions,
                                  const SolverConfig& cfg) {
  LagrangianResult result;
  DualState& state = result.state;
  state.lambda.assign(sessions.size(), initial_lambda(topology, cfg));

  if (sessions.empty()) {
    NetworkPlan plan = empty_plan(0);
    plan.objective = evaluate_objective(topology, plan, sessions, cfg);
    state.iteration = 1;
    state.best_primal = plan;
    state.best_value = plan.objective.combined;
    state.dual_estimate = 0;
    result.plan = plan;
    result.trace.push_back({1, 0.0, plan.objective.combined, 0.0});
    return result;
  }

  for (const Session& s : sessions) {
    bool has_rung = std::any_of(s.rates.begin(), s.rates.end(), [&](double q) {
      return cfg.mode == ObjectiveMode::kJoint ||
             utility_eval(s.utility, q) >= cfg.u_floor;
    });
    if (!has_rung && !cfg.allow_drop) return result;
  }

  const SubgradientConfig& sg = cfg.subgradient;
  int unimproved = 0;
  for (int t = 1; t <= sg.max_iters; ++t) {
    std::vector<double> targets =
        sg.continuous_rates
            ? subproblem2_rates_relaxed(sessions, state.lambda, cfg)
            : subproblem2_rates(sessions, state.lambda, cfg);
    Subproblem1Result flows =
        sg.exact_subproblem1
            ? exact_subproblem1(topology, sessions, state.lambda, cfg,
                                cfg.oracle)
            : subproblem1_flows(topology, sessions, state.lambda, cfg);
    state.iteration = t;
    state.dual_estimate =
        flows.value + subproblem2_value(sessions, state.lambda, targets, cfg);

    bool improved = false;
    auto recovered =
        recover_primal(topology, sessions, flows.active_links, state.lambda,
                       targets, flows.delivered, cfg);
    if (recovered) {
      double value = recovered->plan.objective.combined;
      if (!state.best_primal ||
          value < state.best_value - kZero * std::max(1.0, std::abs(value))) {
        state.best_primal = recovered->plan;
        state.best_value = value;
        result.delivered_capacity = recovered->delivered_capacity;
        improved = true;
      }
    }

    double norm = 0;
    std::vector<double> subgradient(sessions.size());
    for (SessionIndex k = 0; k < sessions.size(); ++k) {
      subgradient[k] = targets[k] - flows.delivered[k];
      norm = std::max(norm, std::abs(subgradient[k]));
    }
    IterationRecord record{t, state.dual_estimate, std::nullopt, norm};
    if (state.best_primal) record.best_primal = state.best_value;
    result.trace.push_back(record);

    unimproved = improved ? 0 : unimproved + 1;
    if (unimproved >= sg.stall_window && norm < sg.stall_tolerance) break;

    double step = sg.theta0 / std::sqrt(static_cast<double>(t));
    for (SessionIndex k = 0; k < sessions.size(); ++k) {
      state.lambda[k] = std::max(0.0, state.lambda[k] + step * subgradient[k]);
    }
  }
  result.plan = state.best_primal;
  return result;
}

std::string trace_to_csv(std::span<const IterationRecord> trace) {
  std::ostringstream out;
  out << "t,dual_estimate,best_primal,subgradient_norm\n";
  for (const IterationRecord& r : trace) {
    out << r.iteration << ',' << format_double(r.dual_estimate) << ','
        << (r.best_primal ? format_double(*r.best_primal) : "") << ','
        << format_double(r.subgradient_norm) << '\n';
  }
  return out.str();
}

}  // namespace greennet
