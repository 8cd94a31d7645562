#include "dst/arborescence.hpp"

#include <algorithm>
#include <string>

#include "dst/error.hpp"

namespace dst {

Cost total_cost(const Instance& instance, std::span<const ArcId> arcs) {
  Cost sum = 0;
  for (ArcId id : arcs) sum += instance.arc(id).cost;
  return sum;
}

bool is_r_arborescence(std::span<const ArcId> arcs, const Instance& instance) {
  const auto n = static_cast<std::size_t>(instance.node_count());
  std::vector<ArcId> in(n, kNoArc);
  std::vector<std::vector<NodeId>> out(n);
  for (ArcId id : arcs) {
    const Arc& a = instance.arc(id);
    if (a.head == instance.root() || in[static_cast<std::size_t>(a.head)] != kNoArc) return false;
    in[static_cast<std::size_t>(a.head)] = id;
    out[static_cast<std::size_t>(a.tail)].push_back(a.head);
  }
  // With in-degree <= 1 and the root a source, reaching every arc from the
  // root rules out cycles as well.
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{instance.root()};
  seen[static_cast<std::size_t>(instance.root())] = 1;
  std::size_t reached_arcs = 0;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    for (NodeId v : out[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++reached_arcs;
        stack.push_back(v);
      }
    }
  }
  return reached_arcs == arcs.size();
}

bool is_steiner_tree(std::span<const ArcId> arcs, const Instance& instance) {
  if (!is_r_arborescence(arcs, instance)) return false;
  const auto n = static_cast<std::size_t>(instance.node_count());
  std::vector<char> has_in(n, 0), has_out(n, 0);
  for (ArcId id : arcs) {
    has_in[static_cast<std::size_t>(instance.arc(id).head)] = 1;
    has_out[static_cast<std::size_t>(instance.arc(id).tail)] = 1;
  }
  for (NodeId t : instance.terminals()) {
    if (!has_in[static_cast<std::size_t>(t)]) return false;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (has_in[v] && !has_out[v] && !instance.is_terminal(static_cast<NodeId>(v))) return false;
  }
  return true;
}

namespace {

struct WeightedEdge {
  int u;
  int v;
  Cost w;
};

// Chu-Liu/Edmonds on nodes 0..n-1 where every node is reachable from root.
// Returns indices into `edges` of the chosen in-edges.
std::vector<int> edmonds(int n, int root, const std::vector<WeightedEdge>& edges) {
  const auto N = static_cast<std::size_t>(n);
  std::vector<int> in(N, -1);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const WeightedEdge& E = edges[static_cast<std::size_t>(e)];
    if (E.v == root || E.u == E.v) continue;
    int& cur = in[static_cast<std::size_t>(E.v)];
    if (cur < 0 || E.w < edges[static_cast<std::size_t>(cur)].w) cur = e;
  }
  auto in_tail = [&](int v) { return edges[static_cast<std::size_t>(in[static_cast<std::size_t>(v)])].u; };

  std::vector<int> comp(N, -1), walk(N, -1);
  std::vector<char> on_cycle(N, 0);
  int cycles = 0;
  for (int v = 0; v < n; ++v) {
    int u = v;
    while (u != root && walk[static_cast<std::size_t>(u)] < 0 && comp[static_cast<std::size_t>(u)] < 0) {
      walk[static_cast<std::size_t>(u)] = v;
      u = in_tail(u);
    }
    if (u != root && walk[static_cast<std::size_t>(u)] == v && comp[static_cast<std::size_t>(u)] < 0) {
      int x = u;
      do {
        comp[static_cast<std::size_t>(x)] = cycles;
        on_cycle[static_cast<std::size_t>(x)] = 1;
        x = in_tail(x);
      } while (x != u);
      ++cycles;
    }
  }

  std::vector<int> chosen;
  if (cycles == 0) {
    for (int v = 0; v < n; ++v) {
      if (v != root) chosen.push_back(in[static_cast<std::size_t>(v)]);
    }
    return chosen;
  }

  int count = cycles;
  for (auto& c : comp) {
    if (c < 0) c = count++;
  }
  std::vector<WeightedEdge> contracted;
  std::vector<int> origin;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    const WeightedEdge& E = edges[static_cast<std::size_t>(e)];
    const int cu = comp[static_cast<std::size_t>(E.u)];
    const int cv = comp[static_cast<std::size_t>(E.v)];
    if (cu == cv || E.v == root) continue;
    const Cost reduce = on_cycle[static_cast<std::size_t>(E.v)]
                            ? edges[static_cast<std::size_t>(in[static_cast<std::size_t>(E.v)])].w
                            : 0;
    contracted.push_back({cu, cv, E.w - reduce});
    origin.push_back(e);
  }

  std::vector<int> entered(static_cast<std::size_t>(cycles), -1);
  for (int s : edmonds(count, comp[static_cast<std::size_t>(root)], contracted)) {
    const int e = origin[static_cast<std::size_t>(s)];
    chosen.push_back(e);
    const int v = edges[static_cast<std::size_t>(e)].v;
    if (on_cycle[static_cast<std::size_t>(v)]) entered[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = v;
  }
  for (int v = 0; v < n; ++v) {
    if (on_cycle[static_cast<std::size_t>(v)] && entered[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] != v) {
      chosen.push_back(in[static_cast<std::size_t>(v)]);
    }
  }
  return chosen;
}

}  // namespace

std::vector<ArcId> min_cost_arborescence(std::span<const ArcId> arc_subset, const Instance& instance,
                                         NodeId root) {
  const auto n = static_cast<std::size_t>(instance.node_count());
  std::vector<ArcId> arcs(arc_subset.begin(), arc_subset.end());
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  std::vector<std::vector<ArcId>> out(n);
  for (ArcId id : arcs) out[static_cast<std::size_t>(instance.arc(id).tail)].push_back(id);
  std::vector<int> local(n, -1);
  std::vector<NodeId> order{root};
  local[static_cast<std::size_t>(root)] = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (ArcId id : out[static_cast<std::size_t>(order[i])]) {
      const NodeId v = instance.arc(id).head;
      if (local[static_cast<std::size_t>(v)] < 0) {
        local[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
        order.push_back(v);
      }
    }
  }
  for (NodeId t : instance.terminals()) {
    if (local[static_cast<std::size_t>(t)] < 0) {
      throw Error(ErrorKind::Unreachable, "terminal " + std::to_string(t) + " is not reachable inside the arc subset");
    }
  }

  std::vector<WeightedEdge> edges;
  std::vector<ArcId> ids;
  for (ArcId id : arcs) {
    const Arc& a = instance.arc(id);
    const int u = local[static_cast<std::size_t>(a.tail)];
    const int v = local[static_cast<std::size_t>(a.head)];
    if (u < 0 || v < 0) continue;
    edges.push_back({u, v, a.cost});
    ids.push_back(id);
  }
  std::vector<ArcId> result;
  for (int e : edmonds(static_cast<int>(order.size()), 0, edges)) result.push_back(ids[static_cast<std::size_t>(e)]);
  std::sort(result.begin(), result.end());
  return result;
}

SteinerTree prune_steiner_leaves(std::span<const ArcId> arcs, const Instance& instance) {
  const auto n = static_cast<std::size_t>(instance.node_count());
  std::vector<ArcId> in(n, kNoArc);
  std::vector<int> out_degree(n, 0);
  for (ArcId id : arcs) {
    in[static_cast<std::size_t>(instance.arc(id).head)] = id;
    ++out_degree[static_cast<std::size_t>(instance.arc(id).tail)];
  }
  auto prunable = [&](NodeId v) {
    const auto i = static_cast<std::size_t>(v);
    return in[i] != kNoArc && out_degree[i] == 0 && !instance.is_terminal(v) && v != instance.root();
  };
  std::vector<NodeId> leaves;
  for (NodeId v = 0; v < instance.node_count(); ++v) {
    if (prunable(v)) leaves.push_back(v);
  }
  std::vector<char> removed(instance.arcs().size(), 0);
  while (!leaves.empty()) {
    const NodeId v = leaves.back();
    leaves.pop_back();
    const ArcId id = in[static_cast<std::size_t>(v)];
    removed[static_cast<std::size_t>(id)] = 1;
    in[static_cast<std::size_t>(v)] = kNoArc;
    const NodeId u = instance.arc(id).tail;
    --out_degree[static_cast<std::size_t>(u)];
    if (prunable(u)) leaves.push_back(u);
  }
  SteinerTree tree;
  for (ArcId id : arcs) {
    if (!removed[static_cast<std::size_t>(id)]) tree.arcs.push_back(id);
  }
  std::sort(tree.arcs.begin(), tree.arcs.end());
  tree.cost = total_cost(instance, tree.arcs);
  return tree;
}

}  // namespace dst
