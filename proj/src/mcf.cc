#include "greennet/mcf.h"

namespace greennet::lp {

McfResult mcf_feasible(const Topology& topology,
                       std::span<const LinkIndex> active_links,
                       std::span<const Demand> demands) {
  const std::size_t num_active = active_links.size();
  const std::size_t num_demands = demands.size();
  auto var = [&](std::size_t active_pos, std::size_t k) {
    return active_pos * num_demands + k;
  };

  std::vector<std::ptrdiff_t> position(topology.num_links(), -1);
  for (std::size_t i = 0; i < num_active; ++i) {
    position.at(active_links[i]) = static_cast<std::ptrdiff_t>(i);
  }

  // A commodity never re-enters its source or leaves its destination.
  LinearProgram program;
  for (std::size_t i = 0; i < num_active; ++i) {
    const Link& link = topology.link(active_links[i]);
    for (std::size_t k = 0; k < num_demands; ++k) {
      const bool allowed = link.to != demands[k].source &&
                           link.from != demands[k].destination;
      program.add_variable(1.0, 0.0, allowed ? kInfinity : 0.0);
    }
  }
  const std::size_t n = program.num_variables();

  for (std::size_t i = 0; i < num_active; ++i) {
    if (num_demands == 0) break;
    std::vector<double> row(n, 0.0);
    for (std::size_t k = 0; k < num_demands; ++k) row[var(i, k)] = 1.0;
    program.add_constraint(std::move(row), RowSense::kLessEqual,
                           topology.link(active_links[i]).capacity);
  }

  for (std::size_t k = 0; k < num_demands; ++k) {
    const Demand& demand = demands[k];
    for (NodeIndex v = 0; v < topology.num_nodes(); ++v) {
      std::vector<double> row(n, 0.0);
      bool touched = false;
      auto add = [&](LinkIndex link, double sign) {
        if (position[link] < 0) return;
        row[var(static_cast<std::size_t>(position[link]), k)] += sign;
        touched = true;
      };
      double rhs = 0;
      if (v == demand.source) {
        for (LinkIndex link : topology.out_links(v)) add(link, 1.0);
        rhs = demand.rate;
      } else if (v == demand.destination) {
        for (LinkIndex link : topology.in_links(v)) add(link, 1.0);
        rhs = demand.rate;
      } else {
        for (LinkIndex link : topology.out_links(v)) add(link, 1.0);
        for (LinkIndex link : topology.in_links(v)) add(link, -1.0);
      }
      if (!touched && rhs == 0) continue;
      program.add_constraint(std::move(row), RowSense::kEqual, rhs);
    }
  }

  McfResult result;
  result.solution = solve_lp(program);
  if (!result.feasible()) return result;

  result.flows = FlowAssignment(topology.num_links(), num_demands);
  for (std::size_t k = 0; k < num_demands; ++k) {
    result.flows.rates()[k] = demands[k].rate;
  }
  for (std::size_t i = 0; i < num_active; ++i) {
    for (std::size_t k = 0; k < num_demands; ++k) {
      double f = result.solution.values[var(i, k)];
      result.flows.at(active_links[i], k) = f > 1e-12 ? f : 0.0;
    }
  }
  return result;
}

std::vector<Demand> demands_for(std::span<const Session> sessions,
                                std::span<const double> rates) {
  std::vector<Demand> demands;
  demands.reserve(sessions.size());
  for (std::size_t k = 0; k < sessions.size(); ++k) {
    demands.push_back({sessions[k].source, sessions[k].destination, rates[k]});
  }
  return demands;
}

}  // namespace greennet::lp
