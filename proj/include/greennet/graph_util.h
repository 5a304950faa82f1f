#ifndef GREENNET_GRAPH_UTIL_H
#define GREENNET_GRAPH_UTIL_H

#include <functional>
#include <optional>
#include <vector>

#include "greennet/model.h"

namespace greennet {

using LinkFilter = std::function<bool(LinkIndex)>;
// Returns the traversal cost of a link, or nullopt if it may not be used.
using LinkWeight = std::function<std::optional<double>(LinkIndex)>;

bool reachable(const Topology& topology, NodeIndex from, NodeIndex to,
               const LinkFilter& usable);

// Fewest-hop path. Deterministic: links are scanned in index order.
std::optional<std::vector<LinkIndex>> shortest_hop_path(
    const Topology& topology, NodeIndex from, NodeIndex to,
    const LinkFilter& usable);

// Minimum-weight path with ties broken by hop count, then by scan order.
// Weights must be non-negative.
std::optional<std::vector<LinkIndex>> cheapest_path(const Topology& topology,
                                                    NodeIndex from,
                                                    NodeIndex to,
                                                    const LinkWeight& weight);

// Splits one session's link flows into source-to-destination paths. Flow
// values at or below `zero_tolerance` are treated as absent. Flow that does
// not lie on such a path (cycles) is ignored.
std::vector<PathFlow> decompose_session_flow(const Topology& topology,
                                             const FlowAssignment& flows,
                                             SessionIndex session,
                                             NodeIndex source,
                                             NodeIndex destination,
                                             double zero_tolerance = 1e-10);

// Minimum residual capacity along a path.
double bottleneck(std::span<const LinkIndex> path,
                  std::span<const double> residual);

}  // namespace greennet

#endif  // GREENNET_GRAPH_UTIL_H
