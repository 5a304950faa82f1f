#include "greennet/io.h"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace greennet {
namespace {

void require_object(const Json& json, const std::string& where) {
  if (!json.is_object()) throw InputError(where + ": expected an object");
}

void reject_unknown(const Json& json, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : json.items()) {
    bool known = false;
    for (std::string_view name : allowed) known = known || key == name;
    if (!known) throw InputError(where + ": unknown field '" + key + "'");
  }
}

const Json& field(const Json& json, const std::string& where,
                  const std::string& name) {
  auto it = json.find(name);
  if (it == json.end()) {
    throw InputError(where + ": missing field '" + name + "'");
  }
  return *it;
}

double as_number(const Json& json, const std::string& where) {
  if (!json.is_number()) throw InputError(where + ": expected a number");
  return json.get<double>();
}

std::string as_string(const Json& json, const std::string& where) {
  if (!json.is_string()) throw InputError(where + ": expected a string");
  return json.get<std::string>();
}

bool as_bool(const Json& json, const std::string& where) {
  if (!json.is_boolean()) throw InputError(where + ": expected a boolean");
  return json.get<bool>();
}

std::int64_t as_integer(const Json& json, const std::string& where) {
  if (!json.is_number_integer()) {
    throw InputError(where + ": expected an integer");
  }
  return json.get<std::int64_t>();
}

std::uint64_t as_unsigned(const Json& json, const std::string& where) {
  if (!json.is_number_unsigned()) {
    throw InputError(where + ": expected a non-negative integer");
  }
  return json.get<std::uint64_t>();
}

const Json& as_array(const Json& json, const std::string& where) {
  if (!json.is_array()) throw InputError(where + ": expected an array");
  return json;
}

NodeIndex resolve_node(const Topology& topology, const Json& json,
                       const std::string& where) {
  std::string name = as_string(json, where);
  auto index = topology.find_node(name);
  if (!index) throw InputError(where + ": unknown node '" + name + "'");
  return *index;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot write file");
  out << contents;
}

std::string format_double(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, end);
}

Topology parse_topology(const Json& json) {
  require_object(json, "topology");
  reject_unknown(json, "topology", {"nodes", "links"});
  const Json& nodes_json = as_array(field(json, "topology", "nodes"), "nodes");
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < nodes_json.size(); ++i) {
    nodes.push_back(
        as_string(nodes_json[i], "nodes[" + std::to_string(i) + "]"));
  }
  if (nodes.empty()) throw InputError("empty topology");

  std::unordered_map<std::string, NodeIndex> by_name;
  for (NodeIndex i = 0; i < nodes.size(); ++i) by_name.emplace(nodes[i], i);
  auto resolve = [&](const Json& value, const std::string& where) {
    std::string name = as_string(value, where);
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw InputError(where + ": unknown node '" + name + "'");
    }
    return it->second;
  };

  std::vector<Link> links;
  static const Json kNoLinks = Json::array();
  const Json& links_json =
      as_array(json.contains("links") ? json["links"] : kNoLinks, "links");
  for (std::size_t i = 0; i < links_json.size(); ++i) {
    std::string where = "links[" + std::to_string(i) + "]";
    const Json& l = links_json[i];
    require_object(l, where);
    reject_unknown(l, where, {"from", "to", "capacity", "energy", "undirected"});
    Link link;
    link.from = resolve(field(l, where, "from"), where + ".from");
    link.to = resolve(field(l, where, "to"), where + ".to");
    link.capacity = as_number(field(l, where, "capacity"), where + ".capacity");
    link.energy = as_number(field(l, where, "energy"), where + ".energy");
    if (link.capacity <= 0) {
      throw InputError(where + ".capacity: must be > 0");
    }
    if (link.energy < 0) throw InputError(where + ".energy: must be >= 0");
    bool undirected = l.contains("undirected") &&
                      as_bool(l["undirected"], where + ".undirected");
    links.push_back(link);
    if (undirected) {
      links.push_back({link.to, link.from, link.capacity, link.energy});
    }
  }
  return Topology(std::move(nodes), std::move(links));
}

Topology load_topology(const std::filesystem::path& path) {
  Json json = read_json_file(path);
  try {
    return parse_topology(json);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json topology_to_json(const Topology& topology) {
  Json links = Json::array();
  for (const Link& link : topology.links()) {
    links.push_back({{"from", topology.node_name(link.from)},
                     {"to", topology.node_name(link.to)},
                     {"capacity", link.capacity},
                     {"energy", link.energy}});
  }
  return {{"nodes", topology.nodes()}, {"links", links}};
}

Session parse_session(const Json& json, const Topology& topology,
                      const std::string& where) {
  require_object(json, where);
  reject_unknown(json, where,
                 {"id", "source", "destination", "rates", "utility"});
  Session session;
  session.id = as_string(field(json, where, "id"), where + ".id");
  session.source =
      resolve_node(topology, field(json, where, "source"), where + ".source");
  session.destination = resolve_node(
      topology, field(json, where, "destination"), where + ".destination");
  const Json& rates = as_array(field(json, where, "rates"), where + ".rates");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    session.rates.push_back(
        as_number(rates[i], where + ".rates[" + std::to_string(i) + "]"));
  }
  if (json.contains("utility")) {
    const Json& u = json["utility"];
    std::string uwhere = where + ".utility";
    if (u.is_string()) {
      auto kind = parse_utility_kind(u.get<std::string>());
      if (!kind) throw InputError(uwhere + ": unknown utility kind");
      session.utility.kind = *kind;
    } else {
      require_object(u, uwhere);
      reject_unknown(u, uwhere, {"kind", "scale", "reference"});
      auto kind =
          parse_utility_kind(as_string(field(u, uwhere, "kind"), uwhere));
      if (!kind) throw InputError(uwhere + ": unknown utility kind");
      session.utility.kind = *kind;
      if (u.contains("scale")) {
        session.utility.scale = as_number(u["scale"], uwhere + ".scale");
      }
      if (u.contains("reference")) {
        session.utility.reference =
            as_number(u["reference"], uwhere + ".reference");
      }
    }
  }
  try {
    validate_session(session, topology);
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
  return session;
}

std::vector<Session> parse_demand(const Json& json, const Topology& topology) {
  require_object(json, "demand");
  reject_unknown(json, "demand", {"sessions"});
  const Json& list =
      as_array(field(json, "demand", "sessions"), "demand.sessions");
  std::vector<Session> sessions;
  for (std::size_t i = 0; i < list.size(); ++i) {
    sessions.push_back(
        parse_session(list[i], topology, "sessions[" + std::to_string(i) + "]"));
    for (std::size_t j = 0; j + 1 < sessions.size(); ++j) {
      if (sessions[j].id == sessions.back().id) {
        throw InputError("sessions[" + std::to_string(i) +
                         "]: duplicate session id '" + sessions.back().id +
                         "'");
      }
    }
  }
  return sessions;
}

std::vector<Session> load_demand(const std::filesystem::path& path,
                                 const Topology& topology) {
  Json json = read_json_file(path);
  try {
    return parse_demand(json, topology);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json session_to_json(const Session& session, const Topology& topology) {
  Json utility;
  const UtilityFunction& u = session.utility;
  bool plain = u.scale == 1.0 &&
               (u.kind != UtilityKind::kNormalizedLadder ||
                u.reference == session.max_rate());
  if (plain) {
    utility = utility_kind_name(u.kind);
  } else {
    utility = {{"kind", utility_kind_name(u.kind)}, {"scale", u.scale}};
    if (u.kind == UtilityKind::kNormalizedLadder) {
      utility["reference"] = u.reference;
    }
  }
  return {{"id", session.id},
          {"source", topology.node_name(session.source)},
          {"destination", topology.node_name(session.destination)},
          {"rates", session.rates},
          {"utility", utility}};
}

Json demand_to_json(std::span<const Session> sessions,
                    const Topology& topology) {
  Json list = Json::array();
  for (const Session& s : sessions) list.push_back(session_to_json(s, topology));
  return {{"sessions", list}};
}

SolverConfig parse_config(const Json& json) {
  require_object(json, "config");
  reject_unknown(json, "config",
                 {"mode", "alpha", "beta", "u_floor", "allow_drop",
                  "subgradient", "oracle", "seed"});
  SolverConfig cfg;
  if (json.contains("mode")) {
    std::string mode = as_string(json["mode"], "mode");
    if (mode == "joint") {
      cfg.mode = ObjectiveMode::kJoint;
    } else if (mode == "constrained") {
      cfg.mode = ObjectiveMode::kConstrained;
    } else {
      throw InputError("mode: expected 'joint' or 'constrained'");
    }
  }
  if (json.contains("alpha")) cfg.alpha = as_number(json["alpha"], "alpha");
  if (json.contains("beta")) cfg.beta = as_number(json["beta"], "beta");
  if (json.contains("u_floor")) {
    cfg.u_floor = as_number(json["u_floor"], "u_floor");
  }
  if (json.contains("allow_drop")) {
    cfg.allow_drop = as_bool(json["allow_drop"], "allow_drop");
  }
  if (json.contains("seed")) cfg.seed = as_unsigned(json["seed"], "seed");
  if (json.contains("subgradient")) {
    const Json& sg = json["subgradient"];
    require_object(sg, "subgradient");
    reject_unknown(sg, "subgradient",
                   {"theta0", "max_iters", "stall_tolerance", "stall_window",
                    "lambda_init", "exact_subproblem1", "continuous_rates"});
    SubgradientConfig& s = cfg.subgradient;
    if (sg.contains("theta0")) {
      s.theta0 = as_number(sg["theta0"], "subgradient.theta0");
    }
    if (sg.contains("max_iters")) {
      s.max_iters =
          static_cast<int>(as_integer(sg["max_iters"], "subgradient.max_iters"));
    }
    if (sg.contains("stall_tolerance")) {
      s.stall_tolerance =
          as_number(sg["stall_tolerance"], "subgradient.stall_tolerance");
    }
    if (sg.contains("stall_window")) {
      s.stall_window = static_cast<int>(
          as_integer(sg["stall_window"], "subgradient.stall_window"));
    }
    if (sg.contains("lambda_init") && !sg["lambda_init"].is_null()) {
      s.lambda_init = as_number(sg["lambda_init"], "subgradient.lambda_init");
    }
    if (sg.contains("exact_subproblem1")) {
      s.exact_subproblem1 =
          as_bool(sg["exact_subproblem1"], "subgradient.exact_subproblem1");
    }
    if (sg.contains("continuous_rates")) {
      s.continuous_rates =
          as_bool(sg["continuous_rates"], "subgradient.continuous_rates");
    }
  }
  if (json.contains("oracle")) {
    const Json& o = json["oracle"];
    require_object(o, "oracle");
    reject_unknown(o, "oracle", {"max_links", "max_rate_combos"});
    if (o.contains("max_links")) {
      cfg.oracle.max_links = as_unsigned(o["max_links"], "oracle.max_links");
    }
    if (o.contains("max_rate_combos")) {
      cfg.oracle.max_rate_combos =
          as_unsigned(o["max_rate_combos"], "oracle.max_rate_combos");
    }
  }
  validate_config(cfg);
  return cfg;
}

SolverConfig load_config(const std::filesystem::path& path) {
  Json json = read_json_file(path);
  try {
    return parse_config(json);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Json config_to_json(const SolverConfig& cfg) {
  const SubgradientConfig& s = cfg.subgradient;
  Json sg = {{"theta0", s.theta0},
             {"max_iters", s.max_iters},
             {"stall_tolerance", s.stall_tolerance},
             {"stall_window", s.stall_window},
             {"exact_subproblem1", s.exact_subproblem1},
             {"continuous_rates", s.continuous_rates}};
  sg["lambda_init"] = s.lambda_init ? Json(*s.lambda_init) : Json(nullptr);
  return {{"mode", cfg.mode == ObjectiveMode::kJoint ? "joint" : "constrained"},
          {"alpha", cfg.alpha},
          {"beta", cfg.beta},
          {"u_floor", cfg.u_floor},
          {"allow_drop", cfg.allow_drop},
          {"subgradient", sg},
          {"oracle",
           {{"max_links", cfg.oracle.max_links},
            {"max_rate_combos", cfg.oracle.max_rate_combos}}},
          {"seed", cfg.seed}};
}

Json objective_to_json(const ObjectiveBreakdown& objective) {
  return {{"utility_sum", objective.utility_sum},
          {"energy_sum", objective.energy_sum},
          {"combined", objective.combined}};
}

Json plan_to_json(const NetworkPlan& plan, const Topology& topology,
                  std::span<const Session> sessions) {
  Json sessions_json = Json::array();
  for (SessionIndex k = 0; k < sessions.size(); ++k) {
    Json paths = Json::array();
    for (const PathFlow& path : plan.routes[k]) {
      Json nodes = Json::array({topology.node_name(sessions[k].source)});
      for (LinkIndex link : path.links) {
        nodes.push_back(topology.node_name(topology.link(link).to));
      }
      paths.push_back(
          {{"links", path.links}, {"nodes", nodes}, {"rate", path.rate}});
    }
    sessions_json.push_back({{"id", sessions[k].id},
                             {"rate", plan.rates[k]},
                             {"dropped", plan.rates[k] == 0},
                             {"paths", paths}});
  }
  return {{"active_links", plan.active_links},
          {"sessions", sessions_json},
          {"objective", objective_to_json(plan.objective)}};
}

Json violations_to_json(std::span<const Violation> violations) {
  Json list = Json::array();
  for (const Violation& v : violations) {
    Json item = {{"kind", violation_kind_name(v.kind)},
                 {"amount", v.amount},
                 {"message", v.message}};
    if (v.link) item["link"] = *v.link;
    if (v.node) item["node"] = *v.node;
    if (v.session) item["session"] = *v.session;
    list.push_back(item);
  }
  return {{"valid", violations.empty()}, {"violations", list}};
}

}  // namespace greennet
