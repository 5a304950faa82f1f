#ifndef GREENNET_MCF_H
#define GREENNET_MCF_H

#include <span>
#include <vector>

#include "greennet/lp.h"
#include "greennet/model.h"

namespace greennet::lp {

struct Demand {
  NodeIndex source = 0;
  NodeIndex destination = 0;
  double rate = 0;
};

struct McfResult {
  LpSolution solution;
  // Witness flow (all links of the topology, zero off the active set); only
  // populated when feasible. Rates mirror the demands.
  FlowAssignment flows;

  bool feasible() const { return solution.status == LpStatus::kOptimal; }
};

// Multicommodity flow restricted to `active_links`: one variable per
// (active link, demand), capacity rows, transit conservation, source outflow
// and destination inflow equal to the demand rate. No demand may re-enter its
// source or leave its destination. The objective minimizes total link flow so
// the witness carries no circulations.
McfResult mcf_feasible(const Topology& topology,
                       std::span<const LinkIndex> active_links,
                       std::span<const Demand> demands);

// Demand vector for the given per-session rates.
std::vector<Demand> demands_for(std::span<const Session> sessions,
                                std::span<const double> rates);

}  // namespace greennet::lp

#endif  // GREENNET_MCF_H
