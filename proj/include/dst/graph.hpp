#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dst {

using NodeId = std::int32_t;
using ArcId = std::int32_t;
using Cost = double;

inline constexpr Cost kInfinity = std::numeric_limits<Cost>::infinity();
inline constexpr ArcId kNoArc = -1;

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  Cost cost = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct UndirectedEdge {
  NodeId u = 0;
  NodeId v = 0;
  Cost cost = 0;
};

/// A validated directed Steiner instance. Commodity k (0-based) is routed from
/// the root to terminals()[k]. Immutable once built.
class Instance {
 public:
  NodeId node_count() const noexcept { return node_count_; }
  std::span<const Arc> arcs() const noexcept { return arcs_; }
  const Arc& arc(ArcId id) const { return arcs_[static_cast<std::size_t>(id)]; }
  NodeId root() const noexcept { return root_; }
  std::span<const NodeId> terminals() const noexcept { return terminals_; }
  NodeId terminal(int commodity) const { return terminals_[static_cast<std::size_t>(commodity)]; }
  int commodity_count() const noexcept { return static_cast<int>(terminals_.size()); }
  bool is_terminal(NodeId v) const { return commodity_of_[static_cast<std::size_t>(v)] >= 0; }
  /// Commodity index of terminal v, or -1 for Steiner nodes and the root.
  int commodity_of(NodeId v) const { return commodity_of_[static_cast<std::size_t>(v)]; }

  /// Outgoing arc ids of v, sorted by head then arc id.
  std::span<const ArcId> out_arcs(NodeId v) const;

 private:
  friend Instance build_instance(NodeId, std::vector<Arc>, NodeId, std::vector<NodeId>);
  Instance(NodeId node_count, std::vector<Arc> arcs, NodeId root, std::vector<NodeId> terminals);

  NodeId node_count_;
  std::vector<Arc> arcs_;
  NodeId root_;
  std::vector<NodeId> terminals_;
  std::vector<int> commodity_of_;
  std::vector<std::size_t> out_offsets_;
  std::vector<ArcId> out_list_;
};

/// Validates and builds an instance. Throws Error with NonPositiveCost,
/// UnreachableTerminal, RootIsTerminal or InvalidInstance.
Instance build_instance(NodeId node_count, std::vector<Arc> arcs, NodeId root,
                        std::vector<NodeId> terminals);

/// Each undirected edge {u,v,c} becomes the arc pair (u,v,c), (v,u,c).
std::vector<Arc> bidirect(std::span<const UndirectedEdge> edges);

/// Shortest-path tree from one source over an arbitrary nonnegative cost
/// vector indexed by arc id. Ties go to the lower-numbered predecessor node.
struct ShortestPathTree {
  std::vector<Cost> dist;
  std::vector<ArcId> pred;
};

ShortestPathTree dijkstra(const Instance& instance, NodeId source, std::span<const Cost> arc_costs);

/// Arc ids along the path to `target` in a shortest-path tree, in order from
/// the source. Empty when target is the source or unreachable.
std::vector<ArcId> tree_path(const Instance& instance, const ShortestPathTree& tree, NodeId target);

/// All-pairs shortest paths, stored row-major: dist(i, j) is the cost of a
/// shortest i-j path and pred_arc(i, j) the last arc on it.
class ApspTable {
 public:
  ApspTable() = default;
  ApspTable(NodeId n, std::vector<Cost> dist, std::vector<ArcId> pred);

  NodeId node_count() const noexcept { return n_; }
  Cost dist(NodeId i, NodeId j) const { return dist_[index(i, j)]; }
  ArcId pred_arc(NodeId i, NodeId j) const { return pred_[index(i, j)]; }
  std::span<const Cost> row(NodeId i) const {
    return {dist_.data() + index(i, 0), static_cast<std::size_t>(n_)};
  }
  bool reachable(NodeId i, NodeId j) const { return dist(i, j) < kInfinity; }

  /// Arc ids of sp(i, j) from i to j; empty for i == j or unreachable pairs.
  std::vector<ArcId> path(const Instance& instance, NodeId i, NodeId j) const;

 private:
  std::size_t index(NodeId i, NodeId j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }

  NodeId n_ = 0;
  std::vector<Cost> dist_;
  std::vector<ArcId> pred_;
};

ApspTable compute_apsp(const Instance& instance);

std::vector<Cost> arc_costs(const Instance& instance);

}  // namespace dst
