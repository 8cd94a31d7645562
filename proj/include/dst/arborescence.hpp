#pragma once

#include <span>
#include <vector>

#include "dst/graph.hpp"

namespace dst {

/// A set of instance arcs forming an r-arborescence whose leaves are all
/// terminals. Arc ids are kept sorted.
struct SteinerTree {
  std::vector<ArcId> arcs;
  Cost cost = 0;
};

Cost total_cost(const Instance& instance, std::span<const ArcId> arcs);

/// True iff every node has in-degree <= 1, the root has in-degree 0, there is
/// no cycle, and every arc endpoint is reachable from the root.
bool is_r_arborescence(std::span<const ArcId> arcs, const Instance& instance);

/// Arborescence that also spans every terminal and has only terminal leaves.
bool is_steiner_tree(std::span<const ArcId> arcs, const Instance& instance);

/// Minimum-cost spanning arborescence (Chu-Liu/Edmonds) of the nodes reachable
/// from `root` using only `arc_subset`. Throws Unreachable when a terminal
/// cannot be reached inside the subset.
std::vector<ArcId> min_cost_arborescence(std::span<const ArcId> arc_subset, const Instance& instance,
                                         NodeId root);

/// Repeatedly drops non-terminal leaves. Input must be an r-arborescence that
/// contains every terminal.
SteinerTree prune_steiner_leaves(std::span<const ArcId> arcs, const Instance& instance);

}  // namespace dst
