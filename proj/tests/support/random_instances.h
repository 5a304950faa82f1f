#ifndef GREENNET_TESTS_SUPPORT_RANDOM_INSTANCES_H
#define GREENNET_TESTS_SUPPORT_RANDOM_INSTANCES_H

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "greennet/graph_util.h"
#include "greennet/model.h"

namespace greennet::testing {

struct Instance {
  Topology topology;
  std::vector<Session> sessions;
  SolverConfig cfg;
};

inline Session ladder_session(std::string id, NodeIndex s, NodeIndex d,
                              std::vector<double> rates,
                              UtilityKind kind = UtilityKind::kLinear) {
  Session session;
  session.id = std::move(id);
  session.source = s;
  session.destination = d;
  session.rates = std::move(rates);
  session.utility.kind = kind;
  return session;
}

// Two nodes A, B joined by two parallel links of equal capacity and unit
// energy; two A->B sessions on the ladder {0.25, 0.5, 1} with linear utility.
inline Instance two_link_example(double capacity) {
  Instance inst;
  inst.topology = Topology({"A", "B"}, {{0, 1, capacity, 1.0},
                                        {0, 1, capacity, 1.0}});
  for (const char* id : {"s1", "s2"}) {
    inst.sessions.push_back(ladder_session(id, 0, 1, {0.25, 0.5, 1.0}));
  }
  inst.cfg.alpha = 1;
  inst.cfg.beta = 1;
  return inst;
}

struct RandomInstanceOptions {
  std::size_t max_nodes = 5;
  std::size_t max_links = 8;
  std::size_t max_sessions = 3;
  std::size_t max_rungs = 3;
  bool allow_drop_sometimes = true;
};

// Every link can carry all sessions at their lowest rung at once, so a
// single-path plan exists whenever each session's endpoints are connected
// (which the generator guarantees).
inline Instance random_instance(std::uint64_t seed,
                                const RandomInstanceOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto dyadic = [&](int lo, int hi) {  // multiples of 1/4
    return 0.25 * static_cast<double>(pick(lo, hi));
  };

  Instance inst;
  const std::size_t n = pick(2, opt.max_nodes);
  std::vector<std::string> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));

  static const std::vector<double> kRungs = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0};
  const std::size_t num_sessions = pick(1, opt.max_sessions);
  std::vector<std::vector<double>> ladders;
  double floor_sum = 0;
  for (std::size_t k = 0; k < num_sessions; ++k) {
    std::set<double> rungs;
    const std::size_t count = pick(1, opt.max_rungs);
    while (rungs.size() < count) rungs.insert(kRungs[pick(0, kRungs.size() - 1)]);
    ladders.emplace_back(rungs.begin(), rungs.end());
    floor_sum += ladders.back().front();
  }

  // A directed backbone path keeps every node reachable from node 0, and a
  // random set of extra links (including reverse and parallel ones) adds
  // routing choices.
  std::vector<NodeIndex> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Link> links;
  auto add_link = [&](NodeIndex a, NodeIndex b) {
    links.push_back({a, b, floor_sum + dyadic(0, 8), dyadic(1, 8)});
  };
  for (std::size_t i = 0; i + 1 < n; ++i) add_link(order[i], order[i + 1]);
  const std::size_t total = std::max(n - 1, pick(n - 1, opt.max_links));
  while (links.size() < total) {
    NodeIndex a = pick(0, n - 1), b = pick(0, n - 1);
    if (a != b) add_link(a, b);
  }
  std::shuffle(links.begin(), links.end(), rng);
  inst.topology = Topology(nodes, links);

  static const UtilityKind kKinds[] = {UtilityKind::kLog1p, UtilityKind::kLinear,
                                       UtilityKind::kNormalizedLadder};
  for (std::size_t k = 0; k < num_sessions; ++k) {
    NodeIndex s = 0, d = 0;
    for (;;) {
      s = pick(0, n - 1);
      d = pick(0, n - 1);
      if (s != d && reachable(inst.topology, s, d,
                              [](LinkIndex) { return true; })) {
        break;
      }
    }
    Session session = ladder_session("k" + std::to_string(k), s, d, ladders[k],
                                     kKinds[pick(0, 2)]);
    session.utility.scale = static_cast<double>(pick(1, 4));
    validate_session(session, inst.topology);
    inst.sessions.push_back(std::move(session));
  }

  static const double kWeights[] = {0.5, 1.0, 2.0};
  inst.cfg.alpha = kWeights[pick(0, 2)];
  inst.cfg.beta = kWeights[pick(0, 2)];
  inst.cfg.allow_drop = opt.allow_drop_sometimes && pick(0, 3) == 0;
  inst.cfg.seed = seed;
  return inst;
}

}  // namespace greennet::testing

#endif  // GREENNET_TESTS_SUPPORT_RANDOM_INSTANCES_H
