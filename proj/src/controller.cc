#include "greennet/controller.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "greennet/errors.h"
#include "greennet/lagrangian.h"
#include "greennet/oracle.h"

namespace greennet {
namespace {

struct Installed {
  std::vector<PathFlow> routes;
  double rate = 0;
};

// Last provisioned state, by session id.
using InstalledState = std::map<std::string, Installed>;

std::optional<NetworkPlan> solve(const Topology& topology,
                                 std::span<const Session> sessions,
                                 const SolverConfig& cfg, SolverKind solver,
                                 std::string& failure) {
  if (solver == SolverKind::kOracle) {
    try {
      return solve_exact(topology, sessions, cfg).plan;
    } catch (const InfeasibleError& e) {
      failure = e.what();
      return std::nullopt;
    }
  }
  LagrangianResult result = solve_lagrangian(topology, sessions, cfg);
  if (!result.plan) failure = "no feasible plan found";
  return result.plan;
}

NetworkPlan plan_from_installed(const Topology& topology,
                                std::span<const Session> sessions,
                                const InstalledState& installed,
                                const SolverConfig& cfg) {
  NetworkPlan plan = empty_plan(sessions.size());
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    auto it = installed.find(sessions[k].id);
    if (it == installed.end()) continue;
    plan.routes[k] = it->second.routes;
    plan.rates[k] = it->second.rate;
  }
  prune_inactive_links(plan, topology);
  plan.objective = evaluate_objective(topology, plan, sessions, cfg);
  return plan;
}

// Uniform double in [0, 1) with 53 random bits.
double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t poisson(std::mt19937_64& rng, double mean) {
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform(rng);
  } while (p > limit);
  return k - 1;
}

std::size_t geometric_holding(std::mt19937_64& rng, double mean) {
  const double u = uniform(rng);
  if (mean <= 1.0) return 1;
  return 1 + static_cast<std::size_t>(
                 std::floor(std::log(1.0 - u) / std::log(1.0 - 1.0 / mean)));
}

void walk(const Topology& topology, const ProvisioningOrder& order,
          const std::string& id, NodeIndex destination, NodeIndex node,
          double fraction, std::vector<LinkIndex>& links,
          std::vector<bool>& on_stack, ReplayedSession& out) {
  if (node == destination) {
    out.paths.push_back({links, fraction});
    out.delivered += fraction;
    return;
  }
  const RoutingTable& table = order.routing_tables.at(node);
  auto entry = table.find(id);
  if (entry == table.end() || entry->second.empty()) {
    out.blackhole = true;
    return;
  }
  on_stack[node] = true;
  for (const NextHop& hop : entry->second) {
    if (on_stack[hop.node]) {
      out.loop = true;
      continue;
    }
    links.push_back(hop.link);
    walk(topology, order, id, destination, hop.node, fraction * hop.share,
         links, on_stack, out);
    links.pop_back();
  }
  on_stack[node] = false;
}

}  // namespace

void validate_trace(const EpochTrace& trace, const Topology& topology) {
  std::set<std::string> active;
  for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
    const EpochEvents& events = trace.epochs[e];
    const std::string where = "epochs[" + std::to_string(e) + "]";
    if (!(events.duration > 0) || !std::isfinite(events.duration)) {
      throw InputError(where + ".duration: must be > 0");
    }
    for (const std::string& id : events.departures) {
      if (active.erase(id) == 0) {
        throw InputError(where + ".departures: session '" + id +
                         "' is not active");
      }
    }
    for (const Session& session : events.arrivals) {
      Session copy = session;
      validate_session(copy, topology);
      if (!active.insert(session.id).second) {
        throw InputError(where + ".arrivals: session '" + session.id +
                         "' is already active");
      }
    }
  }
}

std::optional<SolverKind> parse_solver_kind(std::string_view name) {
  if (name == "oracle") return SolverKind::kOracle;
  if (name == "lagrangian") return SolverKind::kLagrangian;
  return std::nullopt;
}

ProvisioningOrder make_order(const Topology& topology,
                             std::span<const Session> sessions,
                             const NetworkPlan& plan, std::size_t epoch) {
  ProvisioningOrder order;
  order.epoch = epoch;
  order.routing_tables.resize(topology.num_nodes());
  std::vector<bool> used(topology.num_links(), false);
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    const std::string& id = sessions[k].id;
    order.rates[id] = plan.rates[k];
    if (plan.rates[k] <= 0) continue;
    for (const PathFlow& path : plan.routes[k]) {
      for (LinkIndex link : path.links) {
        used[link] = true;
        const Link& l = topology.link(link);
        auto& hops = order.routing_tables[l.from][id];
        auto it = std::find_if(hops.begin(), hops.end(),
                               [&](const NextHop& h) { return h.link == link; });
        if (it == hops.end()) {
          hops.push_back({l.to, link, 0.0});
          it = hops.end() - 1;
        }
        it->share += path.rate / plan.rates[k];
      }
    }
  }
  for (RoutingTable& table : order.routing_tables) {
    for (auto& [id, hops] : table) {
      std::sort(hops.begin(), hops.end(),
                [](const NextHop& a, const NextHop& b) { return a.link < b.link; });
    }
  }
  for (LinkIndex link = 0; link < topology.num_links(); ++link) {
    (used[link] ? order.links_on : order.links_off).push_back(link);
  }
  return order;
}

TelemetryReport make_telemetry(const Topology& topology,
                               std::span<const Session> sessions,
                               const NetworkPlan& plan,
                               const ProvisioningOrder& order,
                               std::size_t epoch, double duration) {
  TelemetryReport report;
  report.epoch = epoch;
  report.duration = duration;
  report.links.resize(topology.num_links());
  std::vector<double> load(topology.num_links(), 0.0);
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    for (const PathFlow& path : plan.routes[k]) {
      for (LinkIndex link : path.links) load[link] += path.rate;
    }
  }
  double energy_on = 0;
  for (LinkIndex link : order.links_on) {
    LinkTelemetry& t = report.links[link];
    t.on = true;
    t.energy = topology.link(link).energy * duration;
    energy_on += topology.link(link).energy;
  }
  for (LinkIndex link = 0; link < topology.num_links(); ++link) {
    report.links[link].utilization = load[link] / topology.link(link).capacity;
  }
  report.energy_total = energy_on * duration;
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    double u = utility_eval(sessions[k].utility, plan.rates[k]);
    report.sessions.push_back({sessions[k].id, plan.rates[k], u});
    report.utility_total += u;
  }
  return report;
}

std::vector<EpochResult> run_simulation(const Topology& topology,
                                        const EpochTrace& trace,
                                        const SolverConfig& cfg,
                                        SolverKind solver) {
  validate_trace(trace, topology);
  std::vector<EpochResult> results;
  std::vector<Session> active;
  InstalledState installed;

  for (const EpochEvents& events : trace.epochs) {
    for (const std::string& id : events.departures) {
      std::erase_if(active, [&](const Session& s) { return s.id == id; });
    }
    active.insert(active.end(), events.arrivals.begin(), events.arrivals.end());

    EpochResult result;
    result.sessions = active;
    std::string failure;
    auto plan = solve(topology, active, cfg, solver, failure);
    if (plan) {
      result.plan = std::move(*plan);
      installed.clear();
      for (SessionIndex k = 0; k < active.size(); ++k) {
        installed[active[k].id] = {result.plan.routes[k], result.plan.rates[k]};
      }
    } else {
      // Keep whatever is still useful from the previous installation.
      std::erase_if(installed, [&](const auto& entry) {
        return std::none_of(active.begin(), active.end(), [&](const Session& s) {
          return s.id == entry.first;
        });
      });
      result.plan = plan_from_installed(topology, active, installed, cfg);
    }
    result.order = make_order(topology, active, result.plan, events.epoch);
    if (!plan) {
      result.order.retained = true;
      result.order.note = failure;
    }
    result.telemetry = make_telemetry(topology, active, result.plan,
                                      result.order, events.epoch,
                                      events.duration);
    results.push_back(std::move(result));
  }
  return results;
}

std::map<std::string, ReplayedSession> replay(
    const Topology& topology, const ProvisioningOrder& order,
    std::span<const Session> sessions) {
  std::map<std::string, ReplayedSession> out;
  for (const Session& session : sessions) {
    auto rate = order.rates.find(session.id);
    if (rate == order.rates.end() || rate->second <= 0) continue;
    ReplayedSession& replayed = out[session.id];
    std::vector<LinkIndex> links;
    std::vector<bool> on_stack(topology.num_nodes(), false);
    walk(topology, order, session.id, session.destination, session.source, 1.0,
         links, on_stack, replayed);
  }
  return out;
}

EpochTrace generate_trace(const Topology& topology, const TraceParams& params) {
  if (topology.num_nodes() < 2) {
    throw InputError("trace generator needs at least two nodes");
  }
  if (!(params.arrival_rate >= 0) || params.arrival_rate > 500) {
    throw InputError("arrival_rate: must be in [0, 500]");
  }
  if (!(params.mean_holding_epochs > 0)) {
    throw InputError("mean_holding_epochs: must be > 0");
  }
  if (!(params.duration > 0)) throw InputError("duration: must be > 0");

  std::mt19937_64 rng(params.seed);
  EpochTrace trace;
  std::multimap<std::size_t, std::string> departures;  // epoch -> id
  std::size_t next_id = 1;
  const std::size_t num_nodes = topology.num_nodes();

  for (std::size_t e = 0; e < params.num_epochs; ++e) {
    EpochEvents events;
    events.epoch = e;
    events.duration = params.duration;
    auto [first, last] = departures.equal_range(e);
    for (auto it = first; it != last; ++it) events.departures.push_back(it->second);

    const std::uint64_t count = poisson(rng, params.arrival_rate);
    for (std::uint64_t i = 0; i < count; ++i) {
      Session session;
      session.id = "s" + std::to_string(next_id++);
      session.source = static_cast<NodeIndex>(uniform(rng) * num_nodes);
      NodeIndex destination =
          static_cast<NodeIndex>(uniform(rng) * (num_nodes - 1));
      if (destination >= session.source) ++destination;
      session.destination = destination;
      session.rates = params.ladder;
      session.utility = params.utility;
      validate_session(session, topology);
      departures.emplace(e + geometric_holding(rng, params.mean_holding_epochs),
                         session.id);
      events.arrivals.push_back(std::move(session));
    }
    trace.epochs.push_back(std::move(events));
  }
  return trace;
}

EpochTrace parse_trace(const Json& json, const Topology& topology) {
  if (!json.is_object() || !json.contains("epochs") ||
      !json["epochs"].is_array()) {
    throw InputError("trace: expected {\"epochs\": [...]}");
  }
  for (const auto& [key, value] : json.items()) {
    if (key != "epochs") throw InputError("trace: unknown field '" + key + "'");
  }
  EpochTrace trace;
  const Json& epochs = json["epochs"];
  for (std::size_t e = 0; e < epochs.size(); ++e) {
    const Json& entry = epochs[e];
    const std::string where = "epochs[" + std::to_string(e) + "]";
    if (!entry.is_object()) throw InputError(where + ": expected an object");
    EpochEvents events;
    events.epoch = e;
    for (const auto& [key, value] : entry.items()) {
      if (key == "epoch") {
        if (!value.is_number_unsigned() || value.get<std::size_t>() != e) {
          throw InputError(where + ".epoch: must equal its position " +
                           std::to_string(e));
        }
      } else if (key == "duration") {
        if (!value.is_number()) {
          throw InputError(where + ".duration: expected a number");
        }
        events.duration = value.get<double>();
      } else if (key == "arrivals") {
        if (!value.is_array()) {
          throw InputError(where + ".arrivals: expected an array");
        }
        for (std::size_t i = 0; i < value.size(); ++i) {
          events.arrivals.push_back(parse_session(
              value[i], topology,
              where + ".arrivals[" + std::to_string(i) + "]"));
        }
      } else if (key == "departures") {
        if (!value.is_array()) {
          throw InputError(where + ".departures: expected an array");
        }
        for (const Json& id : value) {
          if (!id.is_string()) {
            throw InputError(where + ".departures: expected session ids");
          }
          events.departures.push_back(id.get<std::string>());
        }
      } else {
        throw InputError(where + ": unknown field '" + key + "'");
      }
    }
    trace.epochs.push_back(std::move(events));
  }
  validate_trace(trace, topology);
  return trace;
}

EpochTrace load_trace(const std::filesystem::path& path,
                      const Topology& topology) {
  try {
    return parse_trace(read_json_file(path), topology);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json trace_to_json(const EpochTrace& trace, const Topology& topology) {
  Json epochs = Json::array();
  for (const EpochEvents& events : trace.epochs) {
    Json arrivals = Json::array();
    for (const Session& s : events.arrivals) {
      arrivals.push_back(session_to_json(s, topology));
    }
    epochs.push_back({{"epoch", events.epoch},
                      {"duration", events.duration},
                      {"arrivals", std::move(arrivals)},
                      {"departures", events.departures}});
  }
  return {{"epochs", std::move(epochs)}};
}

Json orders_to_json(std::span<const EpochResult> results,
                    const Topology& topology) {
  Json orders = Json::array();
  for (const EpochResult& result : results) {
    const ProvisioningOrder& order = result.order;
    Json tables = Json::object();
    for (NodeIndex v = 0; v < order.routing_tables.size(); ++v) {
      if (order.routing_tables[v].empty()) continue;
      Json table = Json::object();
      for (const auto& [id, hops] : order.routing_tables[v]) {
        Json entries = Json::array();
        for (const NextHop& hop : hops) {
          entries.push_back({{"next", topology.node_name(hop.node)},
                             {"link", hop.link},
                             {"share", hop.share}});
        }
        table[id] = std::move(entries);
      }
      tables[topology.node_name(v)] = std::move(table);
    }
    Json entry = {{"epoch", order.epoch},
                  {"links_on", order.links_on},
                  {"links_off", order.links_off},
                  {"rates", order.rates},
                  {"routing_tables", std::move(tables)},
                  {"retained", order.retained}};
    if (order.retained) entry["note"] = order.note;
    orders.push_back(std::move(entry));
  }
  return {{"orders", std::move(orders)}};
}

std::string telemetry_to_csv(std::span<const EpochResult> results) {
  std::ostringstream out;
  out << "epoch,duration_s,energy_total,utility_total,links_on_count,"
         "session_id,rate,utility\n";
  for (const EpochResult& result : results) {
    const TelemetryReport& t = result.telemetry;
    std::string prefix = std::to_string(t.epoch) + ',' +
                         format_double(t.duration) + ',' +
                         format_double(t.energy_total) + ',' +
                         format_double(t.utility_total) + ',' +
                         std::to_string(result.order.links_on.size()) + ',';
    if (t.sessions.empty()) out << prefix << ",,\n";
    for (const SessionTelemetry& s : t.sessions) {
      out << prefix << s.id << ',' << format_double(s.rate) << ','
          << format_double(s.utility) << '\n';
    }
  }
  return out.str();
}

}  // namespace greennet
