#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dst/arborescence.hpp"
#include "dst/commodity_set.hpp"
#include "dst/graph.hpp"
#include "dst/laminar.hpp"
#include "dst/random.hpp"

namespace dst {

/// Memo of DP rows shared across structures of one instance. A row depends on
/// the whole subtree below its set, so subtrees are hash-consed into ids
/// (leaf k has id k; an internal subtree is keyed by its ordered child ids)
/// and rows are keyed by subtree id. Not thread-safe: one cache per search.
class DpCache {
 public:
  struct Row {
    std::vector<Cost> z;
    std::vector<NodeId> split;
    bool root_only = false;  // only the entry of the instance root is valid
  };

  /// max_rows = 0 sizes the cache from a memory budget per instance.
  explicit DpCache(std::size_t max_rows = 0) : max_rows_(max_rows) {}

  /// Drops every row when `incoming` more would exceed the limit.
  void make_room(std::size_t incoming, std::size_t default_limit);

  int intern(int child_a, int child_b);
  const Row* find(int subtree) const;
  const Row& store(int subtree, Row row);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }
  void count_hit() const { ++hits_; }
  void count_miss() const { ++misses_; }

  /// Column dist(., t_k) for each commodity, built on first use.
  const std::vector<Cost>& terminal_column(const Instance& instance, const ApspTable& apsp, int k);

 private:
  std::size_t max_rows_;
  int next_id_ = -1;
  std::map<std::pair<int, int>, int> ids_;
  std::unordered_map<int, Row> rows_;
  std::vector<std::vector<Cost>> columns_;
  mutable std::size_t hits_ = 0;
  mutable std::size_t misses_ = 0;
};

/// Path segment realizing one set of the family: from where the set starts
/// (its parent's split node, or the root) to its own split node (or its
/// terminal for singletons).
struct Segment {
  CommoditySet set;
  NodeId from = 0;
  NodeId to = 0;
  std::vector<ArcId> arcs;
  Cost cost = 0;
};

struct StructuredSolution {
  LaminarFamily family;
  Cost structured_cost = kInfinity;
  std::vector<Segment> segments;  // family canonical order
  std::vector<ArcId> support;     // sorted, distinct
  Cost support_cost = 0;
};

/// Full z / split-node rows per family set, in family node order; the root
/// set only has its entry at the instance root filled (others +inf / -1).
struct DpTables {
  std::vector<CommoditySet> sets;
  std::vector<std::vector<Cost>> z;
  std::vector<std::vector<NodeId>> split;  // -1 for singletons and +inf entries
};

DpTables compute_tables(const Instance& instance, const ApspTable& apsp, const LaminarFamily& family,
                        DpCache* cache = nullptr);

/// Optimal (r, l)-structured solution of a full-binary family. The returned
/// cost is +inf when some set cannot be realized.
StructuredSolution try_solve_structure(const Instance& instance, const ApspTable& apsp,
                                       const LaminarFamily& family, DpCache* cache = nullptr);

/// As try_solve_structure but throws Infeasible on +inf cost.
StructuredSolution solve_structure(const Instance& instance, const ApspTable& apsp, const LaminarFamily& family,
                                   DpCache* cache = nullptr);

struct Improvement {
  SteinerTree tree;
  LaminarFamily family;
  StructuredSolution solution;
  bool improved = false;  // false when the support already was a Steiner tree
};

/// Replaces a structured solution whose support is not a Steiner tree by the
/// structure of a pruned minimum arborescence inside the support, re-solved.
Improvement improve_solution(const StructuredSolution& solution, const Instance& instance, const ApspTable& apsp,
                             Rng& rng, DpCache* cache = nullptr);

/// Steiner tree inside the support of a solution (the support itself when it
/// already is one).
SteinerTree extract_tree(const StructuredSolution& solution, const Instance& instance);

}  // namespace dst
