#include "greennet/graph_util.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>

namespace greennet {
namespace {

std::vector<LinkIndex> unwind(const Topology& topology,
                              const std::vector<std::optional<LinkIndex>>& via,
                              NodeIndex from, NodeIndex to) {
  std::vector<LinkIndex> path;
  for (NodeIndex at = to; at != from;) {
    LinkIndex link = *via[at];
    path.push_back(link);
    at = topology.link(link).from;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

bool reachable(const Topology& topology, NodeIndex from, NodeIndex to,
               const LinkFilter& usable) {
  return shortest_hop_path(topology, from, to, usable).has_value();
}

std::optional<std::vector<LinkIndex>> shortest_hop_path(
    const Topology& topology, NodeIndex from, NodeIndex to,
    const LinkFilter& usable) {
  std::vector<std::optional<LinkIndex>> via(topology.num_nodes());
  std::vector<bool> seen(topology.num_nodes(), false);
  std::deque<NodeIndex> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    NodeIndex at = queue.front();
    queue.pop_front();
    if (at == to) return unwind(topology, via, from, to);
    for (LinkIndex link : topology.out_links(at)) {
      NodeIndex next = topology.link(link).to;
      if (seen[next] || !usable(link)) continue;
      seen[next] = true;
      via[next] = link;
      queue.push_back(next);
    }
  }
  return std::nullopt;
}

std::optional<std::vector<LinkIndex>> cheapest_path(const Topology& topology,
                                                    NodeIndex from,
                                                    NodeIndex to,
                                                    const LinkWeight& weight) {
  using Label = std::tuple<double, std::size_t, NodeIndex>;  // cost, hops, node
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> cost(topology.num_nodes(), kInf);
  std::vector<std::size_t> hops(topology.num_nodes(),
                                std::numeric_limits<std::size_t>::max());
  std::vector<std::optional<LinkIndex>> via(topology.num_nodes());
  std::vector<bool> done(topology.num_nodes(), false);
  std::priority_queue<Label, std::vector<Label>, std::greater<>> queue;
  cost[from] = 0;
  hops[from] = 0;
  queue.emplace(0.0, 0, from);
  while (!queue.empty()) {
    auto [c, h, at] = queue.top();
    queue.pop();
    if (done[at]) continue;
    done[at] = true;
    if (at == to) return unwind(topology, via, from, to);
    for (LinkIndex link : topology.out_links(at)) {
      NodeIndex next = topology.link(link).to;
      if (done[next]) continue;
      std::optional<double> w = weight(link);
      if (!w) continue;
      double nc = c + *w;
      std::size_t nh = h + 1;
      if (std::tie(nc, nh) < std::tie(cost[next], hops[next])) {
        cost[next] = nc;
        hops[next] = nh;
        via[next] = link;
        queue.emplace(nc, nh, next);
      }
    }
  }
  return std::nullopt;
}

std::vector<PathFlow> decompose_session_flow(const Topology& topology,
                                             const FlowAssignment& flows,
                                             SessionIndex session,
                                             NodeIndex source,
                                             NodeIndex destination,
                                             double zero_tolerance) {
  std::vector<double> remaining(topology.num_links());
  for (LinkIndex link = 0; link < topology.num_links(); ++link) {
    double f = flows.at(link, session);
    remaining[link] = f > zero_tolerance ? f : 0.0;
  }
  std::vector<PathFlow> paths;
  while (true) {
    auto path = shortest_hop_path(
        topology, source, destination,
        [&](LinkIndex link) { return remaining[link] > zero_tolerance; });
    if (!path) break;
    double amount = bottleneck(*path, remaining);
    for (LinkIndex link : *path) {
      remaining[link] -= amount;
      if (remaining[link] <= zero_tolerance) remaining[link] = 0;
    }
    paths.push_back({std::move(*path), amount});
  }
  return paths;
}

double bottleneck(std::span<const LinkIndex> path,
                  std::span<const double> residual) {
  double amount = std::numeric_limits<double>::infinity();
  for (LinkIndex link : path) amount = std::min(amount, residual[link]);
  return amount;
}

}  // namespace greennet
