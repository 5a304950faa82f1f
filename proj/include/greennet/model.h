#ifndef GREENNET_MODEL_H
#define GREENNET_MODEL_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "greennet/errors.h"

namespace greennet {

using NodeIndex = std::size_t;
using LinkIndex = std::size_t;
using SessionIndex = std::size_t;

// Absolute tolerance used by every feasibility comparison in the validator.
inline constexpr double kFeasibilityTolerance = 1e-9;

struct Link {
  NodeIndex from = 0;
  NodeIndex to = 0;
  double capacity = 0;  // rate units per second, > 0
  double energy = 0;    // power drawn while the link is on, >= 0
};

// Directed capacitated graph. Parallel links are allowed and are told apart
// by their index, which is the position in links().
class Topology {
 public:
  Topology() = default;

  // Throws InputError if any invariant is violated.
  Topology(std::vector<std::string> nodes, std::vector<Link> links);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_links() const { return links_.size(); }

  const Link& link(LinkIndex index) const { return links_.at(index); }
  const std::string& node_name(NodeIndex index) const {
    return nodes_.at(index);
  }
  std::optional<NodeIndex> find_node(std::string_view name) const;
  // Throws InputError for unknown names.
  NodeIndex node_index(std::string_view name) const;

  std::span<const LinkIndex> out_links(NodeIndex node) const {
    return out_links_.at(node);
  }
  std::span<const LinkIndex> in_links(NodeIndex node) const {
    return in_links_.at(node);
  }

  // Sum of link energies, accumulated in the order given.
  double energy_of(std::span<const LinkIndex> link_set) const;

  // Same graph with one link's capacity replaced.
  Topology with_capacity(LinkIndex index, double capacity) const;

 private:
  std::vector<std::string> nodes_;
  std::vector<Link> links_;
  std::unordered_map<std::string, NodeIndex> node_by_name_;
  std::vector<std::vector<LinkIndex>> out_links_;
  std::vector<std::vector<LinkIndex>> in_links_;
};

enum class UtilityKind {
  kLog1p,             // scale * ln(1 + r)
  kLinear,            // scale * r
  kNormalizedLadder,  // scale * ln(1 + r) / ln(1 + reference)
};

struct UtilityFunction {
  UtilityKind kind = UtilityKind::kLog1p;
  double scale = 1.0;
  // Only used by kNormalizedLadder: the rate mapped to utility `scale`.
  // Filled with the session's top rate when left unset.
  double reference = 0.0;

  bool operator==(const UtilityFunction&) const = default;
};

std::string_view utility_kind_name(UtilityKind kind);
std::optional<UtilityKind> parse_utility_kind(std::string_view name);

// U(r). U(0) = 0 by convention (a dropped session earns nothing). Throws
// std::invalid_argument for negative or non-finite rates.
double utility_eval(const UtilityFunction& u, double rate);

// Numerical shape check on sorted sample points: positive on r > 0,
// nondecreasing, and concave (midpoint above the chord, tolerance 1e-12).
bool is_concave_nondecreasing(const UtilityFunction& u,
                              std::span<const double> points);

struct Session {
  std::string id;
  NodeIndex source = 0;
  NodeIndex destination = 0;
  std::vector<double> rates;  // strictly increasing, all > 0
  UtilityFunction utility;

  double max_rate() const { return rates.back(); }
  double min_rate() const { return rates.front(); }
  bool elastic() const { return rates.size() > 1; }
  bool operator==(const Session&) const = default;
};

// Throws InputError when the session is not valid against the topology.
// Resolves a normalized-ladder reference left at 0 to the top rate.
void validate_session(Session& session, const Topology& topology);

enum class ObjectiveMode { kJoint, kConstrained };

struct SubgradientConfig {
  double theta0 = 1.0;
  int max_iters = 200;
  double stall_tolerance = 1e-6;
  int stall_window = 25;
  // Initial multiplier for every session. Unset means
  // beta * mean(link energy) / mean(link capacity).
  std::optional<double> lambda_init;
  // Solve the flow sub-problem exactly (subset enumeration + LP).
  bool exact_subproblem1 = false;
  // Rate sub-problem via continuous relaxation and round-down instead of
  // exact enumeration over the ladder.
  bool continuous_rates = false;

  bool operator==(const SubgradientConfig&) const = default;
};

struct OracleLimits {
  std::size_t max_links = 14;
  std::uint64_t max_rate_combos = 2'000'000;

  bool operator==(const OracleLimits&) const = default;
};

struct SolverConfig {
  ObjectiveMode mode = ObjectiveMode::kJoint;
  double alpha = 1.0;
  double beta = 1.0;
  double u_floor = 0.0;  // constrained mode only
  bool allow_drop = false;
  SubgradientConfig subgradient;
  OracleLimits oracle;
  std::uint64_t seed = 0;

  bool operator==(const SolverConfig&) const = default;
};

// Throws InputError when alpha, beta, theta0 or max_iters are out of range.
void validate_config(const SolverConfig& cfg);

// Per-link, per-session flow values r_ijk together with the per-session rate.
class FlowAssignment {
 public:
  FlowAssignment() = default;
  FlowAssignment(std::size_t num_links, std::size_t num_sessions)
      : num_links_(num_links),
        num_sessions_(num_sessions),
        flow_(num_links * num_sessions, 0.0),
        rates_(num_sessions, 0.0) {}

  std::size_t num_links() const { return num_links_; }
  std::size_t num_sessions() const { return num_sessions_; }

  double& at(LinkIndex link, SessionIndex session) {
    return flow_[link * num_sessions_ + session];
  }
  double at(LinkIndex link, SessionIndex session) const {
    return flow_[link * num_sessions_ + session];
  }
  double link_load(LinkIndex link) const;

  std::vector<double>& rates() { return rates_; }
  const std::vector<double>& rates() const { return rates_; }

 private:
  std::size_t num_links_ = 0;
  std::size_t num_sessions_ = 0;
  std::vector<double> flow_;
  std::vector<double> rates_;
};

struct PathFlow {
  std::vector<LinkIndex> links;  // s_k -> d_k in traversal order
  double rate = 0;

  bool operator==(const PathFlow&) const = default;
};

struct ObjectiveBreakdown {
  double utility_sum = 0;
  double energy_sum = 0;
  // Value of the configured objective: the joint score, or the energy sum
  // in constrained mode.
  double combined = 0;
};

struct NetworkPlan {
  std::vector<LinkIndex> active_links;         // sorted ascending
  std::vector<std::vector<PathFlow>> routes;   // per session; empty if dropped
  std::vector<double> rates;                   // per session
  ObjectiveBreakdown objective;

  // Single-path view; throws std::logic_error if the session is split.
  const std::vector<LinkIndex>& route(SessionIndex session) const;
  double total_rate() const;
};

// Plan with no active links and every session dropped.
NetworkPlan empty_plan(std::size_t num_sessions);

// Per-link per-session flows implied by the plan's routes.
FlowAssignment flows_from_plan(const NetworkPlan& plan,
                               const Topology& topology);

// Sets active_links to exactly the links carrying positive flow.
void prune_inactive_links(NetworkPlan& plan, const Topology& topology);

double utility_sum(const NetworkPlan& plan, std::span<const Session> sessions);

// -alpha * sum U(r_k) + beta * sum of energy over active links.
double objective_joint(const Topology& topology, const NetworkPlan& plan,
                       std::span<const Session> sessions,
                       const SolverConfig& cfg);

// Sum of active link energy, or nullopt when a non-dropped session sits
// below the utility floor.
std::optional<double> objective_constrained(const Topology& topology,
                                            const NetworkPlan& plan,
                                            std::span<const Session> sessions,
                                            const SolverConfig& cfg);

// Objective for cfg.mode; +infinity for a constrained-mode floor violation.
ObjectiveBreakdown evaluate_objective(const Topology& topology,
                                      const NetworkPlan& plan,
                                      std::span<const Session> sessions,
                                      const SolverConfig& cfg);

// Utilization of a link: allocated bandwidth over capacity.
double link_utilization(const Topology& topology, const FlowAssignment& flows,
                        LinkIndex link);

enum class ViolationKind {
  kShape,            // dimension mismatch between plan, flows and sessions
  kFlowDomain,       // negative or non-finite flow
  kCapacity,         // sum_k r_ijk > c_ij
  kConservation,     // transit node imbalance
  kSourceFlow,       // outflow at s_k != r_k
  kDestinationFlow,  // inflow at d_k != r_k
  kActivity,         // active_links disagrees with positive-flow links
  kRate,             // r_k not on the ladder (or 0 when dropping is allowed)
  kRoute,            // route is not an s_k -> d_k walk over active links
};

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::optional<LinkIndex> link;
  std::optional<NodeIndex> node;
  std::optional<SessionIndex> session;
  double amount = 0;  // magnitude of the violation where meaningful
  std::string message;
};

struct ValidationOptions {
  bool allow_drop = false;
  double tolerance = kFeasibilityTolerance;
};

// Checks capacity, flow conservation (transit, source outflow, destination
// inflow), link activity and plan structure. Violations are returned, never
// thrown.
std::vector<Violation> validate_plan(const NetworkPlan& plan,
                                     const Topology& topology,
                                     std::span<const Session> sessions,
                                     const FlowAssignment& flows,
                                     const ValidationOptions& options = {});

}  // namespace greennet

#endif  // GREENNET_MODEL_H
