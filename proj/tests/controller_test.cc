#include "greennet/controller.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "greennet/errors.h"
#include "greennet/io.h"
#include "support/random_instances.h"

namespace greennet {
namespace {

using testing::ladder_session;

const std::filesystem::path kData = GREENNET_TEST_DATA;

SolverConfig joint_config() {
  SolverConfig cfg;
  cfg.alpha = 1;
  cfg.beta = 1;
  return cfg;
}

TEST(SimulationTest, SingleEpochMatchesWorkedExample) {
  Topology t = load_topology(kData / "two_links.json");
  EpochTrace trace = load_trace(kData / "one_epoch.json", t);
  for (SolverKind kind : {SolverKind::kOracle, SolverKind::kLagrangian}) {
    auto results = run_simulation(t, trace, joint_config(), kind);
    ASSERT_EQ(results.size(), 1u);
    const ProvisioningOrder& order = results[0].order;
    EXPECT_FALSE(order.retained);
    EXPECT_EQ(order.links_on.size(), 1u);
    EXPECT_EQ(order.links_off.size(), 1u);
    EXPECT_EQ(order.rates.at("s1"), 0.5);
    EXPECT_EQ(order.rates.at("s2"), 0.5);
    EXPECT_EQ(results[0].telemetry.energy_total, 1.0);
    EXPECT_EQ(results[0].telemetry.utility_total, 1.0);
    LinkIndex on = order.links_on[0];
    EXPECT_EQ(results[0].telemetry.links[on].utilization, 1.0);
    EXPECT_EQ(results[0].telemetry.links[order.links_off[0]].energy, 0.0);
  }
}

TEST(SimulationTest, EmptyTrace) {
  Topology t = load_topology(kData / "two_links.json");
  auto results = run_simulation(t, EpochTrace{}, joint_config(),
                                SolverKind::kLagrangian);
  EXPECT_TRUE(results.empty());
  EXPECT_EQ(telemetry_to_csv(results),
            "epoch,duration_s,energy_total,utility_total,links_on_count,"
            "session_id,rate,utility\n");
}

TEST(SimulationTest, AllSessionsDepart) {
  Topology t = load_topology(kData / "two_links.json");
  EpochTrace trace = load_trace(kData / "one_epoch.json", t);
  trace.epochs.push_back({1, 2.0, {}, {"s1", "s2"}});
  auto results =
      run_simulation(t, trace, joint_config(), SolverKind::kLagrangian);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_TRUE(results[1].order.links_on.empty());
  EXPECT_EQ(results[1].order.links_off.size(), 2u);
  EXPECT_TRUE(results[1].order.rates.empty());
  EXPECT_EQ(results[1].telemetry.energy_total, 0.0);
  std::string csv = telemetry_to_csv(results);
  EXPECT_NE(csv.find("\n1,2,0,0,0,,,\n"), std::string::npos) << csv;
}

TEST(SimulationTest, EnergyScalesWithDuration) {
  Topology t = load_topology(kData / "two_links.json");
  EpochTrace trace = load_trace(kData / "one_epoch.json", t);
  trace.epochs[0].duration = 2.5;
  auto results = run_simulation(t, trace, joint_config(), SolverKind::kOracle);
  EXPECT_EQ(results[0].telemetry.energy_total, 2.5);
  EXPECT_EQ(results[0].telemetry.duration, 2.5);
}

TEST(SimulationTest, InfeasibleEpochRetainsPreviousState) {
  Topology t = load_topology(kData / "two_links.json");
  EpochTrace trace;
  trace.epochs.push_back({0, 1.0, {ladder_session("s1", 0, 1, {0.5})}, {}});
  trace.epochs.push_back({1, 1.0, {ladder_session("back", 1, 0, {0.5})}, {}});
  for (SolverKind kind : {SolverKind::kOracle, SolverKind::kLagrangian}) {
    auto results = run_simulation(t, trace, joint_config(), kind);
    ASSERT_EQ(results.size(), 2u);
    const ProvisioningOrder& order = results[1].order;
    EXPECT_TRUE(order.retained);
    EXPECT_FALSE(order.note.empty());
    EXPECT_EQ(order.links_on, results[0].order.links_on);
    EXPECT_EQ(order.rates.at("s1"), 0.5);
    EXPECT_EQ(order.rates.at("back"), 0.0);
    auto replayed = replay(t, order, results[1].sessions);
    EXPECT_EQ(replayed.at("s1").delivered, 1.0);
    EXPECT_EQ(replayed.count("back"), 0u);
  }
}

TEST(SimulationTest, RejectsInvalidTraces) {
  Topology t = load_topology(kData / "two_links.json");
  EpochTrace unknown;
  unknown.epochs.push_back({0, 1.0, {}, {"ghost"}});
  EXPECT_THROW(run_simulation(t, unknown, joint_config(),
                              SolverKind::kLagrangian),
               InputError);
  EpochTrace twice;
  twice.epochs.push_back({0, 1.0, {ladder_session("s", 0, 1, {1})}, {}});
  twice.epochs.push_back({1, 1.0, {ladder_session("s", 0, 1, {1})}, {}});
  EXPECT_THROW(validate_trace(twice, t), InputError);
  EpochTrace zero;
  zero.epochs.push_back({0, 0.0, {}, {}});
  EXPECT_THROW(validate_trace(zero, t), InputError);
}

TEST(ReplayTest, DetectsLoopsAndBlackholes) {
  // A -> B (0), B -> A (1), B -> C (2)
  Topology t({"A", "B", "C"}, {{0, 1, 1, 1}, {1, 0, 1, 1}, {1, 2, 1, 1}});
  std::vector<Session> sessions = {ladder_session("s", 0, 2, {1})};
  ProvisioningOrder order;
  order.routing_tables.resize(3);
  order.rates["s"] = 1;
  order.routing_tables[0]["s"] = {{1, 0, 1.0}};

  auto r = replay(t, order, sessions);
  EXPECT_TRUE(r.at("s").blackhole);
  EXPECT_EQ(r.at("s").delivered, 0.0);

  order.routing_tables[1]["s"] = {{0, 1, 1.0}};
  r = replay(t, order, sessions);
  EXPECT_TRUE(r.at("s").loop);
  EXPECT_FALSE(r.at("s").blackhole);

  order.routing_tables[1]["s"] = {{2, 2, 1.0}};
  r = replay(t, order, sessions);
  EXPECT_FALSE(r.at("s").loop);
  EXPECT_FALSE(r.at("s").blackhole);
  EXPECT_EQ(r.at("s").delivered, 1.0);
  ASSERT_EQ(r.at("s").paths.size(), 1u);
  EXPECT_EQ(r.at("s").paths[0].links, (std::vector<LinkIndex>{0, 2}));
}

TEST(ReplayTest, SplitPlanUsesWeightedNextHops) {
  Topology t({"A", "B"}, {{0, 1, 1, 1}, {0, 1, 1, 1}});
  std::vector<Session> sessions = {ladder_session("s", 0, 1, {2})};
  auto results = run_simulation(
      t, EpochTrace{{{0, 1.0, sessions, {}}}}, joint_config(),
      SolverKind::kOracle);
  const ProvisioningOrder& order = results[0].order;
  ASSERT_EQ(order.routing_tables[0].at("s").size(), 2u);
  for (const NextHop& hop : order.routing_tables[0].at("s")) {
    EXPECT_EQ(hop.share, 0.5);
  }
  auto r = replay(t, order, sessions);
  EXPECT_EQ(r.at("s").paths.size(), 2u);
  EXPECT_DOUBLE_EQ(r.at("s").delivered, 1.0);
}

// Direct transcription of the generator contract.
EpochTrace reference_trace(std::size_t n, const TraceParams& p) {
  std::mt19937_64 rng(p.seed);
  auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  EpochTrace trace;
  std::vector<std::pair<std::size_t, std::string>> leaving;
  int next = 1;
  for (std::size_t e = 0; e < p.num_epochs; ++e) {
    EpochEvents events{e, p.duration, {}, {}};
    for (const auto& [when, id] : leaving) {
      if (when == e) events.departures.push_back(id);
    }
    const double limit = std::exp(-p.arrival_rate);
    int count = -1;
    for (double prod = 1; prod > limit || count < 0; prod *= u()) ++count;
    for (int i = 0; i < count; ++i) {
      Session s = ladder_session("s" + std::to_string(next++), 0, 0, p.ladder);
      s.utility = p.utility;
      s.source = static_cast<NodeIndex>(std::floor(u() * n));
      s.destination = static_cast<NodeIndex>(std::floor(u() * (n - 1)));
      if (s.destination >= s.source) ++s.destination;
      std::size_t hold = 1;
      if (p.mean_holding_epochs > 1) {
        hold += static_cast<std::size_t>(std::floor(
            std::log(1 - u()) / std::log(1 - 1 / p.mean_holding_epochs)));
      }
      leaving.push_back({e + hold, s.id});
      events.arrivals.push_back(s);
    }
    trace.epochs.push_back(events);
  }
  return trace;
}

TEST(TraceGeneratorTest, MatchesContract) {
  Topology t = load_topology(kData / "ring.json");
  TraceParams p;
  p.num_epochs = 10;
  p.arrival_rate = 2;
  p.mean_holding_epochs = 3;
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    p.seed = seed;
    EpochTrace got = generate_trace(t, p);
    EpochTrace want = reference_trace(t.num_nodes(), p);
    ASSERT_EQ(got.epochs.size(), want.epochs.size());
    for (std::size_t e = 0; e < got.epochs.size(); ++e) {
      EXPECT_EQ(got.epochs[e].arrivals, want.epochs[e].arrivals) << e;
      EXPECT_EQ(got.epochs[e].departures, want.epochs[e].departures) << e;
    }
    EXPECT_NO_THROW(validate_trace(got, t));
  }
}

TEST(TraceGeneratorTest, DeterministicAndSeedSensitive) {
  Topology t = load_topology(kData / "ring.json");
  TraceParams p;
  p.seed = 3;
  Json a = trace_to_json(generate_trace(t, p), t);
  EXPECT_EQ(a, trace_to_json(generate_trace(t, p), t));
  p.seed = 4;
  EXPECT_NE(a, trace_to_json(generate_trace(t, p), t));
}

TEST(TraceGeneratorTest, ZeroRateHasNoArrivals) {
  Topology t = load_topology(kData / "ring.json");
  TraceParams p;
  p.arrival_rate = 0;
  for (const EpochEvents& e : generate_trace(t, p).epochs) {
    EXPECT_TRUE(e.arrivals.empty());
  }
}

TEST(TraceGeneratorTest, RejectsBadParameters) {
  Topology single({"A"}, {});
  EXPECT_THROW(generate_trace(single, TraceParams{}), InputError);
  Topology t = load_topology(kData / "ring.json");
  TraceParams p;
  p.arrival_rate = 501;
  EXPECT_THROW(generate_trace(t, p), InputError);
  p.arrival_rate = 1;
  p.mean_holding_epochs = 0;
  EXPECT_THROW(generate_trace(t, p), InputError);
}

TEST(TraceIoTest, RoundTrip) {
  Topology t = load_topology(kData / "ring.json");
  TraceParams p;
  p.seed = 8;
  p.utility.kind = UtilityKind::kLog1p;
  EpochTrace trace = generate_trace(t, p);
  EpochTrace back = parse_trace(trace_to_json(trace, t), t);
  ASSERT_EQ(back.epochs.size(), trace.epochs.size());
  for (std::size_t e = 0; e < back.epochs.size(); ++e) {
    EXPECT_EQ(back.epochs[e].arrivals, trace.epochs[e].arrivals);
    EXPECT_EQ(back.epochs[e].departures, trace.epochs[e].departures);
    EXPECT_EQ(back.epochs[e].duration, trace.epochs[e].duration);
  }
}

TEST(TraceIoTest, ParseErrors) {
  Topology t = load_topology(kData / "two_links.json");
  EXPECT_THROW(parse_trace(Json::parse(R"({"epochs": [], "x": 1})"), t),
               InputError);
  EXPECT_THROW(parse_trace(Json::parse(R"({"epochs": [{"epoch": 3}]})"), t),
               InputError);
  EXPECT_THROW(parse_trace(Json::parse(R"([])"), t), InputError);
}

TEST(OrdersJsonTest, ListsEveryEpoch) {
  Topology t = load_topology(kData / "two_links.json");
  EpochTrace trace = load_trace(kData / "one_epoch.json", t);
  auto results = run_simulation(t, trace, joint_config(), SolverKind::kOracle);
  Json orders = orders_to_json(results, t);
  ASSERT_TRUE(orders.is_array() || orders.is_object());
  EXPECT_NE(orders.dump().find("\"retained\":false"), std::string::npos);
}

TEST(SolverKindTest, Parse) {
  EXPECT_EQ(parse_solver_kind("oracle"), SolverKind::kOracle);
  EXPECT_EQ(parse_solver_kind("lagrangian"), SolverKind::kLagrangian);
  EXPECT_FALSE(parse_solver_kind("greedy"));
}

}  // namespace
}  // namespace greennet
