#include "greennet/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "greennet/graph_util.h"
#include "greennet/mcf.h"

namespace greennet {
namespace {

using Mask = std::uint64_t;

struct Candidate {
  double objective = 0;
  double energy = 0;
  Mask mask = 0;
  double utility = 0;
  std::uint64_t order = 0;  // position of the rate vector in enumeration
};

bool better(const Candidate& a, const Candidate& b) {
  if (std::abs(a.objective - b.objective) > 1e-9) {
    return a.objective < b.objective;
  }
  if (std::abs(a.energy - b.energy) > 1e-12) return a.energy < b.energy;
  if (a.mask != b.mask) return a.mask < b.mask;
  if (std::abs(a.utility - b.utility) > 1e-12) return a.utility > b.utility;
  return a.order < b.order;
}

std::vector<LinkIndex> links_of(Mask mask, std::size_t num_links) {
  std::vector<LinkIndex> links;
  for (LinkIndex i = 0; i < num_links; ++i) {
    if (mask & (Mask{1} << i)) links.push_back(i);
  }
  return links;
}

Mask mask_of(std::span<const LinkIndex> links) {
  Mask mask = 0;
  for (LinkIndex link : links) mask |= Mask{1} << link;
  return mask;
}

// Cheap necessary conditions before paying for an LP.
bool may_be_feasible(const Topology& topology,
                     std::span<const Session> sessions,
                     std::span<const double> rates, Mask mask) {
  auto in_mask = [&](LinkIndex link) { return (mask >> link) & 1; };
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    if (rates[k] == 0) continue;
    const Session& s = sessions[k];
    double out_capacity = 0, in_capacity = 0;
    for (LinkIndex link : topology.out_links(s.source)) {
      if (in_mask(link)) out_capacity += topology.link(link).capacity;
    }
    for (LinkIndex link : topology.in_links(s.destination)) {
      if (in_mask(link)) in_capacity += topology.link(link).capacity;
    }
    if (out_capacity + 1e-9 < rates[k] || in_capacity + 1e-9 < rates[k]) {
      return false;
    }
    if (!reachable(topology, s.source, s.destination, in_mask)) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<double>> candidate_rates(
    std::span<const Session> sessions, const SolverConfig& cfg) {
  std::vector<std::vector<double>> out;
  for (const Session& session : sessions) {
    std::vector<double> rates;
    if (cfg.allow_drop) rates.push_back(0.0);
    for (double q : session.rates) {
      if (cfg.mode == ObjectiveMode::kConstrained &&
          utility_eval(session.utility, q) < cfg.u_floor) {
        continue;
      }
      rates.push_back(q);
    }
    out.push_back(std::move(rates));
  }
  return out;
}

NetworkPlan plan_from_flows(const Topology& topology,
                            std::span<const Session> sessions,
                            const FlowAssignment& flows,
                            const SolverConfig& cfg) {
  NetworkPlan plan = empty_plan(sessions.size());
  plan.rates = flows.rates();
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    if (plan.rates[k] == 0) continue;
    plan.routes[k] = decompose_session_flow(topology, flows, k,
                                            sessions[k].source,
                                            sessions[k].destination);
  }
  prune_inactive_links(plan, topology);
  plan.objective = evaluate_objective(topology, plan, sessions, cfg);
  return plan;
}

OracleResult solve_exact(const Topology& topology,
                         std::span<const Session> sessions,
                         const SolverConfig& cfg) {
  return solve_exact(topology, sessions, cfg, cfg.oracle);
}

OracleResult solve_exact(const Topology& topology,
                         std::span<const Session> sessions,
                         const SolverConfig& cfg, const OracleLimits& limits) {
  const std::size_t num_links = topology.num_links();
  if (num_links > limits.max_links || num_links >= 63) {
    throw InstanceTooLargeError("oracle: " + std::to_string(num_links) +
                                " links exceed the limit of " +
                                std::to_string(limits.max_links));
  }
  const auto candidates = candidate_rates(sessions, cfg);
  double combos = std::ldexp(1.0, static_cast<int>(num_links));
  for (const auto& rates : candidates) {
    combos *= static_cast<double>(rates.size());
  }
  if (combos > static_cast<double>(limits.max_rate_combos)) {
    throw InstanceTooLargeError("oracle: search space exceeds " +
                                std::to_string(limits.max_rate_combos) +
                                " combinations");
  }
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    if (candidates[k].empty()) {
      throw InfeasibleError("session '" + sessions[k].id +
                            "' has no rate meeting the utility floor");
    }
  }

  // Subsets in (energy, mask) order: for a fixed rate vector the first
  // feasible subset is the best one.
  const Mask num_masks = Mask{1} << num_links;
  std::vector<std::pair<double, Mask>> subsets;
  subsets.reserve(num_masks);
  for (Mask mask = 0; mask < num_masks; ++mask) {
    subsets.emplace_back(topology.energy_of(links_of(mask, num_links)), mask);
  }
  std::sort(subsets.begin(), subsets.end());

  const bool joint = cfg.mode == ObjectiveMode::kJoint;
  const double energy_weight = joint ? cfg.beta : 1.0;

  OracleResult result;
  std::optional<Candidate> best;
  std::vector<std::size_t> pick(sessions.size(), 0);
  std::vector<double> rates(sessions.size(), 0.0);
  for (std::uint64_t order = 0;; ++order) {
    double utility = 0;
    for (SessionIndex k = 0; k < sessions.size(); ++k) {
      rates[k] = candidates[k][pick[k]];
      utility += utility_eval(sessions[k].utility, rates[k]);
    }
    const double base = joint ? -cfg.alpha * utility : 0.0;

    if (!best || base <= best->objective + 1e-9) {
      const auto demands = lp::demands_for(sessions, rates);
      for (const auto& [energy, mask] : subsets) {
        if (best && base + energy_weight * energy > best->objective + 1e-9) {
          break;
        }
        if (!may_be_feasible(topology, sessions, rates, mask)) continue;
        const auto active = links_of(mask, num_links);
        ++result.lp_solves;
        lp::McfResult mcf = lp::mcf_feasible(topology, active, demands);
        if (!mcf.feasible()) continue;

        NetworkPlan plan = plan_from_flows(topology, sessions, mcf.flows, cfg);
        Candidate candidate;
        candidate.energy = plan.objective.energy_sum;
        candidate.objective = base + energy_weight * candidate.energy;
        candidate.mask = mask_of(plan.active_links);
        candidate.utility = utility;
        candidate.order = order;
        if (!best || better(candidate, *best)) {
          best = candidate;
          result.plan = std::move(plan);
        }
        break;
      }
    }

    // Odometer over rate indices, last session fastest.
    bool advanced = false;
    for (std::size_t k = sessions.size(); k-- > 0;) {
      if (++pick[k] < candidates[k].size()) {
        advanced = true;
        break;
      }
      pick[k] = 0;
    }
    if (!advanced) break;
  }

  if (!best) throw InfeasibleError("no feasible plan exists");
  result.flows = flows_from_plan(result.plan, topology);
  result.optimum = result.plan.objective.combined;
  return result;
}

}  // namespace greennet
