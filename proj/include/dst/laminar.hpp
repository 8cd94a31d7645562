#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dst/arborescence.hpp"
#include "dst/commodity_set.hpp"
#include "dst/graph.hpp"
#include "dst/random.hpp"

namespace dst {

/// Admissible laminar family over commodities {0..b-1} together with its tree
/// representation. Nodes are stored in canonical set order (cardinality, then
/// bitset value), so the root K is always the last node and two families are
/// equal iff their node lists are.
class LaminarFamily {
 public:
  struct Node {
    CommoditySet set;
    int parent = -1;            // -1 for the root
    std::vector<int> children;  // canonical order
  };

  LaminarFamily() = default;

  int commodity_count() const noexcept { return b_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  int root() const noexcept { return size() - 1; }
  std::vector<CommoditySet> sets() const;

  /// Node index holding `s`, or -1.
  int find(const CommoditySet& s) const;
  bool contains(const CommoditySet& s) const { return find(s) >= 0; }
  bool is_full_binary() const;

  /// Newline-separated bit strings in canonical order.
  std::string to_debug_string() const;

  friend bool operator==(const LaminarFamily& a, const LaminarFamily& b);
  friend bool operator<(const LaminarFamily& a, const LaminarFamily& b);

 private:
  friend LaminarFamily assemble_family(int b, std::vector<CommoditySet> sets);

  int b_ = 0;
  std::vector<Node> nodes_;
};

/// Builds the tree for a collection already known to be admissible and
/// laminar (duplicates removed). Internal fast path; use from_sets to validate.
LaminarFamily assemble_family(int b, std::vector<CommoditySet> sets);

/// Validating constructor. Throws NotLaminar, NotAdmissible or DuplicateSet.
LaminarFamily from_sets(int b, std::vector<CommoditySet> sets);

/// Parses the debug format back (test fixtures). Validates.
LaminarFamily family_from_debug_string(const std::string& text);

/// Merges random pairs of children until every set has at most two.
LaminarFamily random_binarize(const LaminarFamily& family, Rng& rng);

/// Full-binary family drawn uniformly from all (2b-3)!! of them.
LaminarFamily random_full_binary(int b, Rng& rng);

/// Every full-binary family on b commodities, canonical order.
std::vector<LaminarFamily> enumerate_full_binary(int b);

/// A subtree-prune-and-regraft move. `pruned` names the subtree moved; the
/// subtree is regrafted onto the edge entering the node for `target` (the
/// planted root edge when target is the root of the pruned remainder).
struct SprMove {
  CommoditySet pruned;
  CommoditySet target;
};

/// Valid moves of a full-binary family, in deterministic order.
std::vector<SprMove> spr_moves(const LaminarFamily& family);
LaminarFamily apply_spr(const LaminarFamily& family, const SprMove& move);

/// Uniform random valid move applied to `family`. Throws NoNeighbor for b <= 2.
LaminarFamily spr_neighbor(const LaminarFamily& family, Rng& rng);

/// Distinct neighbors of a full-binary family, canonical order.
std::vector<LaminarFamily> spr_neighborhood(const LaminarFamily& family);

/// Structure of a Steiner tree: the commodity sets whose paths share each
/// arc, plus all singletons and K. Throws NotArborescence.
LaminarFamily family_from_tree(std::span<const ArcId> tree_arcs, const Instance& instance);

/// Single-linkage clustering over the terminal metric closure.
/// Throws DisconnectedTerminals.
LaminarFamily initial_single_linkage(const Instance& instance, const ApspTable& apsp);

struct Point {
  double x = 0;
  double y = 0;
};

/// Plane position of each commodity's terminal, indexed by commodity.
using TerminalCoordinates = std::vector<Point>;

/// Lloyd's 2-means started from the given centroids. Returns the cluster
/// label (0 or 1) of every point; both clusters nonempty when points.size() >= 2.
std::vector<int> lloyd_two_means(std::span<const Point> points, Point c0, Point c1);

/// Random 2-means bipartition (label per point).
std::vector<int> kmeans_bipartition(std::span<const Point> points, Rng& rng);

/// Recursive 2-means splitting of all b commodities. Throws MissingCoordinates.
LaminarFamily part_kmeans(const TerminalCoordinates& coords, int b, Rng& rng);

/// Index into `candidates` of the most central one: minimizes
/// |right - left| + |above - below| over strictly-positioned others.
/// Ties go to the lowest index.
std::size_t pick_central_root(std::span<const Point> candidates);

}  // namespace dst
