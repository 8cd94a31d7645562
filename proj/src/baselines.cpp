#include "dst/baselines.hpp"

#include <algorithm>

#include "dst/arborescence.hpp"

namespace dst {

namespace {

BaselineResult finish(const Instance& instance, std::vector<ArcId> arcs, std::string algorithm) {
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  const Cost cost = total_cost(instance, arcs);
  return {std::move(arcs), cost, std::move(algorithm)};
}

}  // namespace

BaselineResult shp1(const Instance& instance, const ApspTable& apsp) {
  std::vector<ArcId> arcs;
  for (NodeId t : instance.terminals()) {
    auto path = apsp.path(instance, instance.root(), t);
    arcs.insert(arcs.end(), path.begin(), path.end());
  }
  return finish(instance, std::move(arcs), "shp1");
}

BaselineResult shp2(const Instance& instance) {
  std::vector<Cost> working = arc_costs(instance);
  std::vector<char> reached(static_cast<std::size_t>(instance.commodity_count()), 0);
  std::vector<ArcId> arcs;
  for (int round = 0; round < instance.commodity_count(); ++round) {
    const ShortestPathTree tree = dijkstra(instance, instance.root(), working);
    int next = -1;
    for (int k = 0; k < instance.commodity_count(); ++k) {
      if (reached[static_cast<std::size_t>(k)]) continue;
      if (next < 0 || tree.dist[static_cast<std::size_t>(instance.terminal(k))] <
                          tree.dist[static_cast<std::size_t>(instance.terminal(next))]) {
        next = k;
      }
    }
    reached[static_cast<std::size_t>(next)] = 1;
    for (ArcId id : tree_path(instance, tree, instance.terminal(next))) {
      working[static_cast<std::size_t>(id)] = 0;
      arcs.push_back(id);
    }
  }
  return finish(instance, std::move(arcs), "shp2");
}

BaselineResult best_benchmark(const Instance& instance, const ApspTable& apsp) {
  BaselineResult first = shp1(instance, apsp);
  BaselineResult second = shp2(instance);
  BaselineResult best = second.cost < first.cost ? std::move(second) : std::move(first);
  best.algorithm = "bb2";
  return best;
}

}  // namespace dst
