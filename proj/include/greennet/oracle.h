#ifndef GREENNET_ORACLE_H
#define GREENNET_ORACLE_H

#include <cstdint>
#include <span>
#include <vector>

#include "greennet/model.h"

namespace greennet {

struct OracleResult {
  NetworkPlan plan;
  FlowAssignment flows;
  double optimum = 0;
  std::uint64_t lp_solves = 0;
};

// Rates the exact solver tries per session: the ladder, restricted to rungs
// meeting the utility floor in constrained mode, with 0 prepended when
// sessions may be dropped.
std::vector<std::vector<double>> candidate_rates(
    std::span<const Session> sessions, const SolverConfig& cfg);

// Exhaustive search over active-link subsets and rate vectors; feasibility of
// each pair is decided by the multicommodity flow LP. Among feasible pairs
// the plan minimizing the configured objective is returned, ties broken by
// lower energy, then by the smaller link-subset bitmask (bit i = link i),
// then by higher utility.
//
// Throws InstanceTooLargeError beyond `limits` and InfeasibleError when no
// pair is feasible.
OracleResult solve_exact(const Topology& topology,
                         std::span<const Session> sessions,
                         const SolverConfig& cfg, const OracleLimits& limits);
OracleResult solve_exact(const Topology& topology,
                         std::span<const Session> sessions,
                         const SolverConfig& cfg);

// Plan carrying the given feasible flows: each session's flow is split into
// paths, rates are taken from the flows, and links without flow are pruned.
NetworkPlan plan_from_flows(const Topology& topology,
                            std::span<const Session> sessions,
                            const FlowAssignment& flows,
                            const SolverConfig& cfg);

}  // namespace greennet

#endif  // GREENNET_ORACLE_H
