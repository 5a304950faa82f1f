#include "greennet/mcf.h"

#include <gtest/gtest.h>

#include "support/random_instances.h"

namespace greennet::lp {
namespace {

std::vector<LinkIndex> all_links(const Topology& t) {
  std::vector<LinkIndex> links(t.num_links());
  for (LinkIndex l = 0; l < links.size(); ++l) links[l] = l;
  return links;
}

TEST(McfTest, ParallelLinks) {
  Topology t({"A", "B"}, {{0, 1, 1, 1}, {0, 1, 1, 1}});
  std::vector<Demand> full = {{0, 1, 1}, {0, 1, 1}};
  std::vector<Demand> half = {{0, 1, 0.5}, {0, 1, 0.5}};
  std::vector<LinkIndex> one = {0};
  EXPECT_TRUE(mcf_feasible(t, all_links(t), full).feasible());
  EXPECT_FALSE(mcf_feasible(t, one, full).feasible());
  EXPECT_TRUE(mcf_feasible(t, one, half).feasible());
}

TEST(McfTest, WitnessRespectsActiveSet) {
  Topology t({"A", "M", "B"}, {{0, 1, 2, 1}, {1, 2, 2, 1}, {0, 2, 2, 1}});
  std::vector<Demand> demand = {{0, 2, 1.5}};
  std::vector<LinkIndex> detour = {0, 1};
  McfResult r = mcf_feasible(t, detour, demand);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.flows.at(0, 0), 1.5, 1e-12);
  EXPECT_NEAR(r.flows.at(1, 0), 1.5, 1e-12);
  EXPECT_EQ(r.flows.at(2, 0), 0.0);
}

TEST(McfTest, SplitsAcrossPaths) {
  Topology t({"A", "M", "B"}, {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 1}});
  std::vector<Demand> demand = {{0, 2, 2}};
  McfResult r = mcf_feasible(t, all_links(t), demand);
  ASSERT_TRUE(r.feasible());
  EXPECT_NEAR(r.flows.at(2, 0), 1, 1e-12);
  EXPECT_NEAR(r.flows.at(0, 0), 1, 1e-12);
}

TEST(McfTest, LoopsThroughEndpointsDoNotCount) {
  // S->D carries 1; loops S->X->S and D->Y->D could fake another unit of
  // outflow at S and inflow at D.
  Topology t({"S", "D", "X", "Y"}, {{0, 1, 1, 1},
                                     {0, 2, 5, 1},
                                     {2, 0, 5, 1},
                                     {1, 3, 5, 1},
                                     {3, 1, 5, 1}});
  std::vector<Demand> two = {{0, 1, 2}};
  std::vector<Demand> one = {{0, 1, 1}};
  EXPECT_FALSE(mcf_feasible(t, all_links(t), two).feasible());
  EXPECT_TRUE(mcf_feasible(t, all_links(t), one).feasible());
}

TEST(McfTest, ZeroDemandNeedsNoLinks) {
  Topology t({"A", "B"}, {{0, 1, 1, 1}});
  std::vector<Demand> zero = {{0, 1, 0}};
  std::vector<LinkIndex> none;
  EXPECT_TRUE(mcf_feasible(t, none, zero).feasible());
  std::vector<Demand> some = {{0, 1, 0.5}};
  EXPECT_FALSE(mcf_feasible(t, none, some).feasible());
}

TEST(McfTest, WitnessValidatesOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = testing::random_instance(seed);
    std::vector<double> rates;
    for (const Session& s : inst.sessions) rates.push_back(s.min_rate());
    auto demands = demands_for(inst.sessions, rates);
    McfResult r = mcf_feasible(inst.topology, all_links(inst.topology), demands);
    // Every link carries the sum of lowest rungs, so this is always feasible.
    ASSERT_TRUE(r.feasible()) << "seed " << seed;
    NetworkPlan plan = empty_plan(inst.sessions.size());
    plan.rates = rates;
    for (LinkIndex l = 0; l < inst.topology.num_links(); ++l) {
      if (r.flows.link_load(l) > 0) plan.active_links.push_back(l);
    }
    // Only the per-node checks matter here; the plan has no routes.
    for (const Violation& v :
         validate_plan(plan, inst.topology, inst.sessions, r.flows)) {
      EXPECT_EQ(v.kind, ViolationKind::kRoute) << "seed " << seed << ": "
                                               << v.message;
    }
  }
}

}  // namespace
}  // namespace greennet::lp
