#include "greennet/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace greennet {

Topology::Topology(std::vector<std::string> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  if (nodes_.empty()) {
    throw InputError("empty topology");
  }
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].empty()) {
      throw InputError("nodes[" + std::to_string(i) + "]: empty node id");
    }
    if (!node_by_name_.emplace(nodes_[i], i).second) {
      throw InputError("nodes[" + std::to_string(i) + "]: duplicate node id '" +
                       nodes_[i] + "'");
    }
  }
  out_links_.resize(nodes_.size());
  in_links_.resize(nodes_.size());
  for (LinkIndex i = 0; i < links_.size(); ++i) {
    const Link& link = links_[i];
    std::string where = "links[" + std::to_string(i) + "]";
    if (link.from >= nodes_.size() || link.to >= nodes_.size()) {
      throw InputError(where + ": endpoint out of range");
    }
    if (link.from == link.to) {
      throw InputError(where + ": self-loop at '" + nodes_[link.from] + "'");
    }
    if (!std::isfinite(link.capacity) || link.capacity <= 0) {
      throw InputError(where + ".capacity: must be a finite value > 0");
    }
    if (!std::isfinite(link.energy) || link.energy < 0) {
      throw InputError(where + ".energy: must be a finite value >= 0");
    }
    out_links_[link.from].push_back(i);
    in_links_[link.to].push_back(i);
  }
}

std::optional<NodeIndex> Topology::find_node(std::string_view name) const {
  auto it = node_by_name_.find(std::string(name));
  if (it == node_by_name_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Topology::node_index(std::string_view name) const {
  auto index = find_node(name);
  if (!index) {
    throw InputError("unknown node '" + std::string(name) + "'");
  }
  return *index;
}

double Topology::energy_of(std::span<const LinkIndex> link_set) const {
  double total = 0;
  for (LinkIndex link : link_set) total += links_.at(link).energy;
  return total;
}

Topology Topology::with_capacity(LinkIndex index, double capacity) const {
  std::vector<Link> links = links_;
  links.at(index).capacity = capacity;
  return Topology(nodes_, std::move(links));
}

std::string_view utility_kind_name(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::kLog1p:
      return "log1p";
    case UtilityKind::kLinear:
      return "linear";
    case UtilityKind::kNormalizedLadder:
      return "normalized-ladder";
  }
  return "unknown";
}

std::optional<UtilityKind> parse_utility_kind(std::string_view name) {
  if (name == "log1p") return UtilityKind::kLog1p;
  if (name == "linear") return UtilityKind::kLinear;
  if (name == "normalized-ladder") return UtilityKind::kNormalizedLadder;
  return std::nullopt;
}

double utility_eval(const UtilityFunction& u, double rate) {
  if (!std::isfinite(rate) || rate < 0) {
    throw std::invalid_argument("utility_eval: rate must be finite and >= 0");
  }
  if (rate == 0) return 0;
  switch (u.kind) {
    case UtilityKind::kLog1p:
      return u.scale * std::log1p(rate);
    case UtilityKind::kLinear:
      return u.scale * rate;
    case UtilityKind::kNormalizedLadder:
      return u.scale * std::log1p(rate) / std::log1p(u.reference);
  }
  return 0;
}

bool is_concave_nondecreasing(const UtilityFunction& u,
                              std::span<const double> points) {
  constexpr double kTol = 1e-12;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] > 0 && !(utility_eval(u, points[i]) > 0)) return false;
    if (i > 0 && utility_eval(u, points[i]) + kTol <
                     utility_eval(u, points[i - 1])) {
      return false;
    }
  }
  for (std::size_t i = 0; i + 2 < points.size(); ++i) {
    double a = points[i], b = points[i + 1], c = points[i + 2];
    if (!(a < b && b < c)) continue;
    double t = (b - a) / (c - a);
    double chord = (1 - t) * utility_eval(u, a) + t * utility_eval(u, c);
    if (utility_eval(u, b) < chord - kTol) return false;
  }
  return true;
}

void validate_session(Session& session, const Topology& topology) {
  std::string where = "session '" + session.id + "'";
  if (session.id.empty()) throw InputError("session with empty id");
  if (session.source >= topology.num_nodes() ||
      session.destination >= topology.num_nodes()) {
    throw InputError(where + ": endpoint out of range");
  }
  if (session.source == session.destination) {
    throw InputError(where + ": source equals destination");
  }
  if (session.rates.empty()) throw InputError(where + ": empty rate ladder");
  for (std::size_t i = 0; i < session.rates.size(); ++i) {
    double r = session.rates[i];
    if (!std::isfinite(r) || r <= 0) {
      throw InputError(where + ".rates[" + std::to_string(i) +
                       "]: must be a finite value > 0");
    }
    if (i > 0 && r <= session.rates[i - 1]) {
      throw InputError(where + ".rates: must be strictly increasing");
    }
  }
  UtilityFunction& u = session.utility;
  if (!std::isfinite(u.scale) || u.scale <= 0) {
    throw InputError(where + ".utility.scale: must be > 0");
  }
  if (u.kind == UtilityKind::kNormalizedLadder) {
    if (u.reference == 0) u.reference = session.max_rate();
    if (!std::isfinite(u.reference) || u.reference <= 0) {
      throw InputError(where + ".utility.reference: must be > 0");
    }
  }
}

void validate_config(const SolverConfig& cfg) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0; };
  if (!positive(cfg.alpha)) throw InputError("alpha: must be > 0");
  if (!positive(cfg.beta)) throw InputError("beta: must be > 0");
  if (!std::isfinite(cfg.u_floor)) throw InputError("u_floor: must be finite");
  if (!positive(cfg.subgradient.theta0)) {
    throw InputError("subgradient.theta0: must be > 0");
  }
  if (cfg.subgradient.max_iters < 1) {
    throw InputError("subgradient.max_iters: must be >= 1");
  }
  if (!positive(cfg.subgradient.stall_tolerance)) {
    throw InputError("subgradient.stall_tolerance: must be > 0");
  }
  if (cfg.subgradient.stall_window < 1) {
    throw InputError("subgradient.stall_window: must be >= 1");
  }
  if (cfg.subgradient.lambda_init &&
      !(std::isfinite(*cfg.subgradient.lambda_init) &&
        *cfg.subgradient.lambda_init >= 0)) {
    throw InputError("subgradient.lambda_init: must be >= 0");
  }
}

double FlowAssignment::link_load(LinkIndex link) const {
  double load = 0;
  for (SessionIndex k = 0; k < num_sessions_; ++k) load += at(link, k);
  return load;
}

const std::vector<LinkIndex>& NetworkPlan::route(SessionIndex session) const {
  const auto& paths = routes.at(session);
  if (paths.size() != 1) {
    throw std::logic_error("session is not routed on a single path");
  }
  return paths.front().links;
}

double NetworkPlan::total_rate() const {
  double total = 0;
  for (double r : rates) total += r;
  return total;
}

NetworkPlan empty_plan(std::size_t num_sessions) {
  NetworkPlan plan;
  plan.routes.resize(num_sessions);
  plan.rates.assign(num_sessions, 0.0);
  return plan;
}

FlowAssignment flows_from_plan(const NetworkPlan& plan,
                               const Topology& topology) {
  FlowAssignment flows(topology.num_links(), plan.rates.size());
  flows.rates() = plan.rates;
  for (SessionIndex k = 0; k < plan.routes.size(); ++k) {
    for (const PathFlow& path : plan.routes[k]) {
      for (LinkIndex link : path.links) flows.at(link, k) += path.rate;
    }
  }
  return flows;
}

void prune_inactive_links(NetworkPlan& plan, const Topology& topology) {
  FlowAssignment flows = flows_from_plan(plan, topology);
  plan.active_links.clear();
  for (LinkIndex link = 0; link < topology.num_links(); ++link) {
    if (flows.link_load(link) > 0) plan.active_links.push_back(link);
  }
}

double utility_sum(const NetworkPlan& plan, std::span<const Session> sessions) {
  double total = 0;
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    total += utility_eval(sessions[k].utility, plan.rates.at(k));
  }
  return total;
}

double objective_joint(const Topology& topology, const NetworkPlan& plan,
                       std::span<const Session> sessions,
                       const SolverConfig& cfg) {
  return -cfg.alpha * utility_sum(plan, sessions) +
         cfg.beta * topology.energy_of(plan.active_links);
}

std::optional<double> objective_constrained(const Topology& topology,
                                            const NetworkPlan& plan,
                                            std::span<const Session> sessions,
                                            const SolverConfig& cfg) {
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    double rate = plan.rates.at(k);
    if (rate == 0) continue;  // dropped
    if (utility_eval(sessions[k].utility, rate) < cfg.u_floor) {
      return std::nullopt;
    }
  }
  return topology.energy_of(plan.active_links);
}

ObjectiveBreakdown evaluate_objective(const Topology& topology,
                                      const NetworkPlan& plan,
                                      std::span<const Session> sessions,
                                      const SolverConfig& cfg) {
  ObjectiveBreakdown out;
  out.utility_sum = utility_sum(plan, sessions);
  out.energy_sum = topology.energy_of(plan.active_links);
  if (cfg.mode == ObjectiveMode::kJoint) {
    out.combined = -cfg.alpha * out.utility_sum + cfg.beta * out.energy_sum;
  } else {
    out.combined = objective_constrained(topology, plan, sessions, cfg)
                       .value_or(std::numeric_limits<double>::infinity());
  }
  return out;
}

double link_utilization(const Topology& topology, const FlowAssignment& flows,
                        LinkIndex link) {
  return flows.link_load(link) / topology.link(link).capacity;
}

std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kShape:
      return "shape";
    case ViolationKind::kFlowDomain:
      return "flow-domain";
    case ViolationKind::kCapacity:
      return "capacity";
    case ViolationKind::kConservation:
      return "conservation";
    case ViolationKind::kSourceFlow:
      return "source-flow";
    case ViolationKind::kDestinationFlow:
      return "destination-flow";
    case ViolationKind::kActivity:
      return "activity";
    case ViolationKind::kRate:
      return "rate";
    case ViolationKind::kRoute:
      return "route";
  }
  return "unknown";
}

namespace {

std::string describe(std::string_view what, double value, double expected) {
  std::ostringstream out;
  out.precision(17);
  out << what << ": " << value << " (expected " << expected << ")";
  return out.str();
}

void check_routes(const NetworkPlan& plan, const Topology& topology,
                  std::span<const Session> sessions,
                  const std::vector<bool>& active, double tol,
                  std::vector<Violation>& out) {
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    const Session& session = sessions[k];
    const auto& paths = plan.routes[k];
    auto fail = [&](std::string message) {
      out.push_back({ViolationKind::kRoute, std::nullopt, std::nullopt, k, 0,
                     "session '" + session.id + "': " + std::move(message)});
    };
    if (paths.empty()) {
      if (plan.rates[k] > 0) fail("positive rate but no route");
      continue;
    }
    double total = 0;
    for (const PathFlow& path : paths) {
      total += path.rate;
      if (path.links.empty()) {
        fail("empty path");
        continue;
      }
      NodeIndex at = session.source;
      for (LinkIndex link : path.links) {
        if (link >= topology.num_links()) {
          fail("route references unknown link " + std::to_string(link));
          break;
        }
        if (topology.link(link).from != at) {
          fail("route is not a connected walk at link " +
               std::to_string(link));
          break;
        }
        if (!active[link]) {
          fail("route uses inactive link " + std::to_string(link));
        }
        at = topology.link(link).to;
      }
      if (at != session.destination) fail("route does not end at destination");
    }
    if (std::abs(total - plan.rates[k]) > tol) {
      fail(describe("path rates sum", total, plan.rates[k]));
    }
  }
}

}  // namespace

std::vector<Violation> validate_plan(const NetworkPlan& plan,
                                     const Topology& topology,
                                     std::span<const Session> sessions,
                                     const FlowAssignment& flows,
                                     const ValidationOptions& options) {
  std::vector<Violation> out;
  const double tol = options.tolerance;
  const std::size_t num_links = topology.num_links();
  const std::size_t num_sessions = sessions.size();

  if (flows.num_links() != num_links || flows.num_sessions() != num_sessions ||
      flows.rates().size() != num_sessions ||
      plan.rates.size() != num_sessions ||
      plan.routes.size() != num_sessions) {
    out.push_back({ViolationKind::kShape, std::nullopt, std::nullopt,
                   std::nullopt, 0,
                   "plan, flows and sessions disagree on dimensions"});
    return out;
  }

  for (LinkIndex link = 0; link < num_links; ++link) {
    for (SessionIndex k = 0; k < num_sessions; ++k) {
      double f = flows.at(link, k);
      if (!std::isfinite(f) || f < 0) {
        out.push_back({ViolationKind::kFlowDomain, link, std::nullopt, k, f,
                       "flow must be finite and non-negative"});
      }
    }
  }
  if (!out.empty()) return out;

  for (SessionIndex k = 0; k < num_sessions; ++k) {
    const Session& session = sessions[k];
    double rate = plan.rates[k];
    if (rate != flows.rates()[k]) {
      out.push_back({ViolationKind::kRate, std::nullopt, std::nullopt, k,
                     rate - flows.rates()[k],
                     "plan rate and flow assignment rate differ"});
    }
    bool on_ladder = std::any_of(
        session.rates.begin(), session.rates.end(),
        [&](double q) { return std::abs(q - rate) <= tol; });
    bool dropped_ok = options.allow_drop && rate == 0;
    if (!on_ladder && !dropped_ok) {
      out.push_back({ViolationKind::kRate, std::nullopt, std::nullopt, k, rate,
                     "session '" + session.id + "': rate not on its ladder"});
    }
  }

  std::vector<bool> active(num_links, false);
  for (LinkIndex link : plan.active_links) {
    if (link >= num_links) {
      out.push_back({ViolationKind::kActivity, link, std::nullopt,
                     std::nullopt, 0, "active link index out of range"});
      continue;
    }
    active[link] = true;
  }

  for (LinkIndex link = 0; link < num_links; ++link) {
    double load = flows.link_load(link);
    double capacity = topology.link(link).capacity;
    if (load > capacity + tol) {
      out.push_back({ViolationKind::kCapacity, link, std::nullopt,
                     std::nullopt, load - capacity,
                     describe("link " + std::to_string(link) + " load", load,
                              capacity)});
    }
    if ((load > 0) != active[link]) {
      out.push_back({ViolationKind::kActivity, link, std::nullopt,
                     std::nullopt, load,
                     active[link] ? "active link carries no flow"
                                  : "inactive link carries flow"});
    }
  }

  // Transit nodes balance; the source emits r_k on its outgoing links and
  // receives nothing back, the destination absorbs r_k and emits nothing.
  for (SessionIndex k = 0; k < num_sessions; ++k) {
    const Session& session = sessions[k];
    double rate = flows.rates()[k];
    for (NodeIndex v = 0; v < topology.num_nodes(); ++v) {
      double outflow = 0, inflow = 0;
      for (LinkIndex link : topology.out_links(v)) outflow += flows.at(link, k);
      for (LinkIndex link : topology.in_links(v)) inflow += flows.at(link, k);
      if (v == session.source) {
        if (std::abs(outflow - rate) > tol) {
          out.push_back({ViolationKind::kSourceFlow, std::nullopt, v, k,
                         outflow - rate,
                         describe("session '" + session.id + "' outflow",
                                  outflow, rate)});
        }
        if (inflow > tol) {
          out.push_back({ViolationKind::kSourceFlow, std::nullopt, v, k,
                         inflow,
                         describe("session '" + session.id +
                                      "' flow returning to its source",
                                  inflow, 0)});
        }
      } else if (v == session.destination) {
        if (std::abs(inflow - rate) > tol) {
          out.push_back({ViolationKind::kDestinationFlow, std::nullopt, v, k,
                         inflow - rate,
                         describe("session '" + session.id + "' inflow",
                                  inflow, rate)});
        }
        if (outflow > tol) {
          out.push_back({ViolationKind::kDestinationFlow, std::nullopt, v, k,
                         outflow,
                         describe("session '" + session.id +
                                      "' flow leaving its destination",
                                  outflow, 0)});
        }
      } else if (std::abs(outflow - inflow) > tol) {
        out.push_back({ViolationKind::kConservation, std::nullopt, v, k,
                       outflow - inflow,
                       describe("session '" + session.id + "' imbalance at '" +
                                    topology.node_name(v) + "'",
                                outflow - inflow, 0)});
      }
    }
  }

  check_routes(plan, topology, sessions, active, tol, out);
  return out;
}

}  // namespace greennet
