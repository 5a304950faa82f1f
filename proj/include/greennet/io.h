#ifndef GREENNET_IO_H
#define GREENNET_IO_H

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "greennet/model.h"
#include "json.hpp"

namespace greennet {

using Json = nlohmann::json;

// Reads and parses a JSON file. Parse errors carry the byte offset reported
// by the parser; I/O failures name the path. Both throw InputError.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& contents);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

// {"nodes":["A","B"],"links":[{"from":"A","to":"B","capacity":1,"energy":1}]}
// A link with "undirected": true expands into two independent directed links
// (from->to, then to->from) at consecutive indices.
Topology parse_topology(const Json& json);
Topology load_topology(const std::filesystem::path& path);
Json topology_to_json(const Topology& topology);

// {"sessions":[{"id":"s1","source":"A","destination":"B",
//               "rates":[0.25,0.5,1.0],"utility":"log1p"}]}
// "utility" is either a kind name or {"kind":..., "scale":..., "reference":...}.
Session parse_session(const Json& json, const Topology& topology,
                      const std::string& where);
std::vector<Session> parse_demand(const Json& json, const Topology& topology);
std::vector<Session> load_demand(const std::filesystem::path& path,
                                 const Topology& topology);
Json session_to_json(const Session& session, const Topology& topology);
Json demand_to_json(std::span<const Session> sessions,
                    const Topology& topology);

// Mirrors SolverConfig; unknown fields are rejected. Missing fields keep
// their defaults.
SolverConfig parse_config(const Json& json);
SolverConfig load_config(const std::filesystem::path& path);
Json config_to_json(const SolverConfig& cfg);

Json plan_to_json(const NetworkPlan& plan, const Topology& topology,
                  std::span<const Session> sessions);
Json objective_to_json(const ObjectiveBreakdown& objective);
Json violations_to_json(std::span<const Violation> violations);

}  // namespace greennet

#endif  // GREENNET_IO_H
