#include "dst/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <utility>

#include "dst/error.hpp"

namespace dst {

Instance::Instance(NodeId node_count, std::vector<Arc> arcs, NodeId root, std::vector<NodeId> terminals)
    : node_count_(node_count),
      arcs_(std::move(arcs)),
      root_(root),
      terminals_(std::move(terminals)),
      commodity_of_(static_cast<std::size_t>(node_count), -1) {
  for (std::size_t k = 0; k < terminals_.size(); ++k) {
    commodity_of_[static_cast<std::size_t>(terminals_[k])] = static_cast<int>(k);
  }
  // CSR adjacency.
  out_offsets_.assign(static_cast<std::size_t>(node_count_) + 1, 0);
  for (const Arc& a : arcs_) ++out_offsets_[static_cast<std::size_t>(a.tail) + 1];
  for (std::size_t v = 0; v < static_cast<std::size_t>(node_count_); ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
  }
  out_list_.resize(arcs_.size());
  std::vector<std::size_t> fill(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::size_t id = 0; id < arcs_.size(); ++id) {
    out_list_[fill[static_cast<std::size_t>(arcs_[id].tail)]++] = static_cast<ArcId>(id);
  }
  for (std::size_t v = 0; v < static_cast<std::size_t>(node_count_); ++v) {
    std::sort(out_list_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v]),
              out_list_.begin() + static_cast<std::ptrdiff_t>(out_offsets_[v + 1]),
              [&](ArcId a, ArcId b) {
                return std::pair(arcs_[static_cast<std::size_t>(a)].head, a) <
                       std::pair(arcs_[static_cast<std::size_t>(b)].head, b);
              });
  }
}

std::span<const ArcId> Instance::out_arcs(NodeId v) const {
  const auto begin = out_offsets_[static_cast<std::size_t>(v)];
  const auto end = out_offsets_[static_cast<std::size_t>(v) + 1];
  return {out_list_.data() + begin, end - begin};
}

Instance build_instance(NodeId node_count, std::vector<Arc> arcs, NodeId root,
                        std::vector<NodeId> terminals) {
  if (node_count <= 0) throw Error(ErrorKind::InvalidInstance, "node count must be positive");
  auto in_range = [&](NodeId v) { return v >= 0 && v < node_count; };
  if (!in_range(root)) throw Error(ErrorKind::InvalidInstance, "root out of range");
  if (terminals.empty()) throw Error(ErrorKind::InvalidInstance, "no terminals");
  for (const Arc& a : arcs) {
    if (!in_range(a.tail) || !in_range(a.head)) {
      throw Error(ErrorKind::InvalidInstance,
                  "arc endpoint out of range: " + std::to_string(a.tail) + "->" + std::to_string(a.head));
    }
    if (!(a.cost > 0)) {
      throw Error(ErrorKind::NonPositiveCost,
                  "arc " + std::to_string(a.tail) + "->" + std::to_string(a.head) + " has cost " +
                      std::to_string(a.cost));
    }
  }
  std::vector<char> seen(static_cast<std::size_t>(node_count), 0);
  for (NodeId t : terminals) {
    if (!in_range(t)) throw Error(ErrorKind::InvalidInstance, "terminal out of range");
    if (t == root) throw Error(ErrorKind::RootIsTerminal, "root " + std::to_string(root) + " is listed as a terminal");
    if (seen[static_cast<std::size_t>(t)]) {
      throw Error(ErrorKind::InvalidInstance, "duplicate terminal " + std::to_string(t));
    }
    seen[static_cast<std::size_t>(t)] = 1;
  }

  Instance instance(node_count, std::move(arcs), root, std::move(terminals));

  std::vector<char> reached(static_cast<std::size_t>(node_count), 0);
  std::vector<NodeId> stack{root};
  reached[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (ArcId id : instance.out_arcs(u)) {
      NodeId v = instance.arc(id).head;
      if (!reached[static_cast<std::size_t>(v)]) {
        reached[static_cast<std::size_t>(v)] = 1;
        stack.push_back(v);
      }
    }
  }
  for (NodeId t : instance.terminals()) {
    if (!reached[static_cast<std::size_t>(t)]) {
      throw Error(ErrorKind::UnreachableTerminal, "terminal " + std::to_string(t) + " is unreachable from the root");
    }
  }
  return instance;
}

std::vector<Arc> bidirect(std::span<const UndirectedEdge> edges) {
  std::vector<Arc> arcs;
  arcs.reserve(edges.size() * 2);
  for (const UndirectedEdge& e : edges) {
    if (!(e.cost > 0)) {
      throw Error(ErrorKind::NonPositiveCost, "edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}");
    }
    arcs.push_back({e.u, e.v, e.cost});
    arcs.push_back({e.v, e.u, e.cost});
  }
  return arcs;
}

std::vector<Cost> arc_costs(const Instance& instance) {
  std::vector<Cost> costs;
  costs.reserve(instance.arcs().size());
  for (const Arc& a : instance.arcs()) costs.push_back(a.cost);
  return costs;
}

ShortestPathTree dijkstra(const Instance& instance, NodeId source, std::span<const Cost> arc_costs) {
  const auto n = static_cast<std::size_t>(instance.node_count());
  ShortestPathTree tree{std::vector<Cost>(n, kInfinity), std::vector<ArcId>(n, kNoArc)};
  std::vector<char> settled(n, 0);
  using Entry = std::pair<Cost, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  tree.dist[static_cast<std::size_t>(source)] = 0;
  heap.emplace(0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[static_cast<std::size_t>(u)] || d > tree.dist[static_cast<std::size_t>(u)]) continue;
    settled[static_cast<std::size_t>(u)] = 1;
    for (ArcId id : instance.out_arcs(u)) {
      const Arc& a = instance.arc(id);
      const auto v = static_cast<std::size_t>(a.head);
      if (settled[v]) continue;
      const Cost nd = d + arc_costs[static_cast<std::size_t>(id)];
      if (nd < tree.dist[v]) {
        tree.dist[v] = nd;
        tree.pred[v] = id;
        heap.emplace(nd, a.head);
      } else if (nd == tree.dist[v] && tree.pred[v] != kNoArc) {
        // Equal-cost alternative: keep the lower-numbered predecessor node.
        const Arc& cur = instance.arc(tree.pred[v]);
        if (std::pair(a.tail, id) < std::pair(cur.tail, tree.pred[v])) tree.pred[v] = id;
      }
    }
  }
  return tree;
}

std::vector<ArcId> tree_path(const Instance& instance, const ShortestPathTree& tree, NodeId target) {
  std::vector<ArcId> path;
  for (ArcId id = tree.pred[static_cast<std::size_t>(target)]; id != kNoArc;
       id = tree.pred[static_cast<std::size_t>(instance.arc(id).tail)]) {
    path.push_back(id);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ApspTable::ApspTable(NodeId n, std::vector<Cost> dist, std::vector<ArcId> pred)
    : n_(n), dist_(std::move(dist)), pred_(std::move(pred)) {}

std::vector<ArcId> ApspTable::path(const Instance& instance, NodeId i, NodeId j) const {
  std::vector<ArcId> arcs;
  if (i == j || !reachable(i, j)) return arcs;
  for (NodeId v = j; v != i;) {
    ArcId id = pred_arc(i, v);
    arcs.push_back(id);
    v = instance.arc(id).tail;
  }
  std::reverse(arcs.begin(), arcs.end());
  return arcs;
}

ApspTable compute_apsp(const Instance& instance) {
  const NodeId n = instance.node_count();
  const auto costs = arc_costs(instance);
  std::vector<Cost> dist;
  std::vector<ArcId> pred;
  dist.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  pred.reserve(dist.capacity());
  for (NodeId s = 0; s < n; ++s) {
    ShortestPathTree tree = dijkstra(instance, s, costs);
    dist.insert(dist.end(), tree.dist.begin(), tree.dist.end());
    pred.insert(pred.end(), tree.pred.begin(), tree.pred.end());
  }
  return ApspTable(n, std::move(dist), std::move(pred));
}

}  // namespace dst
