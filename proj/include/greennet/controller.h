#ifndef GREENNET_CONTROLLER_H
#define GREENNET_CONTROLLER_H

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greennet/io.h"
#include "greennet/model.h"

namespace greennet {

struct EpochEvents {
  std::size_t epoch = 0;
  double duration = 1.0;  // seconds, > 0
  std::vector<Session> arrivals;
  std::vector<std::string> departures;  // ids of currently active sessions
};

struct EpochTrace {
  std::vector<EpochEvents> epochs;
};

// Throws InputError when a departure names an inactive session, an arrival
// reuses an active id, or a duration is not positive.
void validate_trace(const EpochTrace& trace, const Topology& topology);

struct NextHop {
  NodeIndex node = 0;
  LinkIndex link = 0;
  double share = 1.0;  // fraction of the session's rate sent over `link`

  bool operator==(const NextHop&) const = default;
};

using RoutingTable = std::map<std::string, std::vector<NextHop>>;

struct ProvisioningOrder {
  std::size_t epoch = 0;
  std::vector<LinkIndex> links_on;
  std::vector<LinkIndex> links_off;
  std::vector<RoutingTable> routing_tables;  // indexed by node
  std::map<std::string, double> rates;       // every active session
  // Set when the solver failed and the previous state was kept.
  bool retained = false;
  std::string note;
};

struct LinkTelemetry {
  bool on = false;
  double utilization = 0;  // allocated / capacity
  double energy = 0;       // energy * duration when on
};

struct SessionTelemetry {
  std::string id;
  double rate = 0;
  double utility = 0;
};

struct TelemetryReport {
  std::size_t epoch = 0;
  double duration = 0;
  std::vector<LinkTelemetry> links;
  std::vector<SessionTelemetry> sessions;
  double energy_total = 0;  // (sum of energy over links_on) * duration
  double utility_total = 0;
};

struct EpochResult {
  ProvisioningOrder order;
  TelemetryReport telemetry;
  std::vector<Session> sessions;  // active during the epoch, arrival order
  NetworkPlan plan;               // what was installed, aligned with sessions
};

enum class SolverKind { kOracle, kLagrangian };

std::optional<SolverKind> parse_solver_kind(std::string_view name);

// Exact solver errors other than infeasibility (InstanceTooLargeError)
// propagate.
std::vector<EpochResult> run_simulation(const Topology& topology,
                                        const EpochTrace& trace,
                                        const SolverConfig& cfg,
                                        SolverKind solver);

ProvisioningOrder make_order(const Topology& topology,
                             std::span<const Session> sessions,
                             const NetworkPlan& plan, std::size_t epoch);

TelemetryReport make_telemetry(const Topology& topology,
                               std::span<const Session> sessions,
                               const NetworkPlan& plan,
                               const ProvisioningOrder& order,
                               std::size_t epoch, double duration);

struct ReplayedSession {
  std::vector<PathFlow> paths;  // rate holds the fraction of the session
  double delivered = 0;         // total fraction reaching the destination
  bool loop = false;
  bool blackhole = false;
};

// Follows the routing tables hop by hop from each session's source.
std::map<std::string, ReplayedSession> replay(
    const Topology& topology, const ProvisioningOrder& order,
    std::span<const Session> sessions);

struct TraceParams {
  std::size_t num_epochs = 10;
  double arrival_rate = 1.0;         // mean arrivals per epoch
  double mean_holding_epochs = 3.0;  // geometric holding time
  std::vector<double> ladder = {0.25, 0.5, 1.0};
  std::uint64_t seed = 0;
  double duration = 1.0;
  UtilityFunction utility;
};

// Seeded synthetic trace. Per epoch: departures of sessions whose holding
// time ends, then a Poisson number of arrivals (Knuth's method) with uniform
// source, uniform destination != source, and holding time
// 1 + floor(ln(1-u) / ln(1-1/m)). Uniforms are (mt19937_64() >> 11) * 2^-53.
EpochTrace generate_trace(const Topology& topology, const TraceParams& params);

EpochTrace parse_trace(const Json& json, const Topology& topology);
EpochTrace load_trace(const std::filesystem::path& path,
                      const Topology& topology);
Json trace_to_json(const EpochTrace& trace, const Topology& topology);

Json orders_to_json(std::span<const EpochResult> results,
                    const Topology& topology);

// Long format, one row per (epoch, session); an epoch without sessions gets
// one row with empty session columns.
std::string telemetry_to_csv(std::span<const EpochResult> results);

}  // namespace greennet

#endif  // GREENNET_CONTROLLER_H
