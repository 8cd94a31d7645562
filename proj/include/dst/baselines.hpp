#pragma once

#include <string>
#include <vector>

#include "dst/graph.hpp"

namespace dst {

struct BaselineResult {
  std::vector<ArcId> arcs;  // sorted, distinct
  Cost cost = 0;
  std::string algorithm;
};

/// Union of shortest root-terminal paths.
BaselineResult shp1(const Instance& instance, const ApspTable& apsp);

/// Greedy: repeatedly connect the closest unreached terminal, making the arcs
/// already used free. Ties go to the lowest commodity index.
BaselineResult shp2(const Instance& instance);

/// Cheaper of shp1 and shp2 (shp1 on ties), tagged "bb2".
BaselineResult best_benchmark(const Instance& instance, const ApspTable& apsp);

}  // namespace dst
