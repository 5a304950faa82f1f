#ifndef GREENNET_LAGRANGIAN_H
#define GREENNET_LAGRANGIAN_H

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greennet/model.h"

namespace greennet {

// Relaxing the source-outflow constraint with multipliers lambda_k >= 0
// splits the problem into a fixed-charge flow problem that earns lambda_k
// per unit delivered (flow sub-problem) and an independent per-session rate
// choice charged lambda_k per unit requested (rate sub-problem). The master
// loop moves lambda along the subgradient (requested - delivered), and every
// iterate is turned into a feasible plan by routing on the opened links and
// rounding rates down the ladder.

struct DualState {
  std::vector<double> lambda;
  int iteration = 0;
  std::optional<NetworkPlan> best_primal;
  double best_value = 0;  // objective of best_primal when set
  double dual_estimate = 0;
};

struct IterationRecord {
  int iteration = 0;
  double dual_estimate = 0;
  std::optional<double> best_primal;
  double subgradient_norm = 0;  // infinity norm
};

// Per-session rates minimizing -alpha*U(r) + lambda_k*r over the ladder
// (plus 0 when dropping is allowed). Ties go to the smaller rate. In
// constrained mode only rungs meeting the utility floor are eligible and the
// utility weight is zero.
std::vector<double> subproblem2_rates(std::span<const Session> sessions,
                                      std::span<const double> lambda,
                                      const SolverConfig& cfg);

// Sum over sessions of -alpha*U(r_k) + lambda_k*r_k.
double subproblem2_value(std::span<const Session> sessions,
                         std::span<const double> lambda,
                         std::span<const double> rates,
                         const SolverConfig& cfg);

// Continuous relaxation of the rate choice rounded down to the ladder.
std::vector<double> subproblem2_rates_relaxed(std::span<const Session> sessions,
                                              std::span<const double> lambda,
                                              const SolverConfig& cfg);

struct Subproblem1Result {
  std::vector<LinkIndex> active_links;  // links carrying flow, sorted
  FlowAssignment flows;                 // rates() hold delivered flow
  std::vector<double> delivered;        // net outflow at each source
  double value = 0;  // beta*sum(energy) - sum(lambda_k * delivered_k)
};

// Greedy path heuristic: sessions in descending lambda (ties by id) each take
// the path with the least opening cost, carrying min(residual, top rate),
// and commit only when lambda_k * flow strictly exceeds that opening cost.
Subproblem1Result subproblem1_flows(const Topology& topology,
                                    std::span<const Session> sessions,
                                    std::span<const double> lambda,
                                    const SolverConfig& cfg);

// Exact variant: enumerates link subsets and solves the reward LP on each.
// Throws InstanceTooLargeError beyond limits.max_links.
Subproblem1Result exact_subproblem1(const Topology& topology,
                                    std::span<const Session> sessions,
                                    std::span<const double> lambda,
                                    const SolverConfig& cfg,
                                    const OracleLimits& limits);

struct RecoveryResult {
  NetworkPlan plan;
  // Capacity the session's path could offer when its rate was fixed; the
  // rate is the largest admissible rung not above it (0 when dropped).
  std::vector<double> delivered_capacity;
};

// Builds a feasible single-path plan from the links opened by the flow
// sub-problem. Returns nullopt when some session cannot be served and
// dropping is not allowed.
std::optional<RecoveryResult> recover_primal(
    const Topology& topology, std::span<const Session> sessions,
    std::span<const LinkIndex> opened, std::span<const double> lambda,
    std::span<const double> target_rates, std::span<const double> delivered,
    const SolverConfig& cfg);

struct LagrangianResult {
  std::optional<NetworkPlan> plan;  // nullopt: no feasible plan found
  std::vector<double> delivered_capacity;  // of the returned plan
  DualState state;
  std::vector<IterationRecord> trace;
};

LagrangianResult solve_lagrangian(const Topology& topology,
                                  std::span<const Session> sessions,
                                  const SolverConfig& cfg);

// Initial multiplier: cfg.subgradient.lambda_init or
// beta * mean(energy) / mean(capacity).
double initial_lambda(const Topology& topology, const SolverConfig& cfg);

// t,dual_estimate,best_primal,subgradient_norm
std::string trace_to_csv(std::span<const IterationRecord> trace);

}  // namespace greennet

#endif  // GREENNET_LAGRANGIAN_H
