#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dst/graph.hpp"

namespace gen {

struct Shape {
  int nodes = 6;
  int terminals = 3;
  int min_cost = 1;
  int max_cost = 10;
  double arc_density = 0.35;  // chance of each extra ordered pair
};

/// Random directed instance with integer costs. Node 0 is the root and the
/// terminals are reachable: a random spanning out-tree is laid down first.
dst::Instance random_instance(std::mt19937_64& rng, const Shape& shape);

/// Random undirected instance (bidirected), connected.
dst::Instance random_undirected(std::mt19937_64& rng, const Shape& shape);

/// The small example graph used across the suites: r=0, a=1, t1=2, t2=3 with
/// arcs (r,a,1) (a,t1,1) (a,t2,1) (r,t1,3) (r,t2,3).
dst::Instance g1();

}  // namespace gen
