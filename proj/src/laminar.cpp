#include "dst/laminar.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "dst/error.hpp"

namespace dst {

std::vector<CommoditySet> LaminarFamily::sets() const {
  std::vector<CommoditySet> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) out.push_back(n.set);
  return out;
}

int LaminarFamily::find(const CommoditySet& s) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), s,
                             [](const Node& n, const CommoditySet& v) { return n.set < v; });
  if (it == nodes_.end() || !(it->set == s)) return -1;
  return static_cast<int>(it - nodes_.begin());
}

bool LaminarFamily::is_full_binary() const {
  if (size() != 2 * b_ - 1) return false;
  for (const Node& n : nodes_) {
    const std::size_t want = n.set.size() >= 2 ? 2 : 0;
    if (n.children.size() != want) return false;
  }
  return true;
}

std::string LaminarFamily::to_debug_string() const {
  std::string out;
  for (const Node& n : nodes_) {
    out += n.set.to_bit_string(b_);
    out += '\n';
  }
  return out;
}

bool operator==(const LaminarFamily& a, const LaminarFamily& b) {
  if (a.b_ != b.b_ || a.nodes_.size() != b.nodes_.size()) return false;
  for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
    if (!(a.nodes_[i].set == b.nodes_[i].set)) return false;
  }
  return true;
}

bool operator<(const LaminarFamily& a, const LaminarFamily& b) {
  if (a.b_ != b.b_) return a.b_ < b.b_;
  return std::lexicographical_compare(a.nodes_.begin(), a.nodes_.end(), b.nodes_.begin(), b.nodes_.end(),
                                      [](const LaminarFamily::Node& x, const LaminarFamily::Node& y) {
                                        return x.set < y.set;
                                      });
}

LaminarFamily assemble_family(int b, std::vector<CommoditySet> sets) {
  std::sort(sets.begin(), sets.end());
  LaminarFamily family;
  family.b_ = b;
  family.nodes_.resize(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) family.nodes_[i].set = sets[i];
  // In canonical order the first strict superset is the smallest one, which
  // for a laminar collection is the parent.
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (sets[i].subset_of(sets[j])) {
        family.nodes_[i].parent = static_cast<int>(j);
        family.nodes_[j].children.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return family;
}

LaminarFamily from_sets(int b, std::vector<CommoditySet> sets) {
  if (b < 1 || b > kMaxCommodities) {
    throw Error(ErrorKind::NotAdmissible, "commodity count " + std::to_string(b) + " out of range");
  }
  const CommoditySet all = CommoditySet::all(b);
  for (const CommoditySet& s : sets) {
    if (s.empty()) throw Error(ErrorKind::NotAdmissible, "empty set");
    if (!s.subset_of(all)) throw Error(ErrorKind::NotAdmissible, "set outside the commodity range");
  }
  std::sort(sets.begin(), sets.end());
  for (std::size_t i = 0; i + 1 < sets.size(); ++i) {
    if (sets[i] == sets[i + 1]) throw Error(ErrorKind::DuplicateSet, sets[i].to_bit_string(b));
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (sets[i].intersects(sets[j]) && !sets[i].subset_of(sets[j]) && !sets[j].subset_of(sets[i])) {
        throw Error(ErrorKind::NotLaminar, sets[i].to_bit_string(b) + " crosses " + sets[j].to_bit_string(b));
      }
    }
  }
  auto has = [&](const CommoditySet& s) { return std::binary_search(sets.begin(), sets.end(), s); };
  if (!has(all)) throw Error(ErrorKind::NotAdmissible, "missing the full commodity set");
  for (int k = 0; k < b; ++k) {
    if (!has(CommoditySet::singleton(k))) {
      throw Error(ErrorKind::NotAdmissible, "missing singleton " + std::to_string(k));
    }
  }
  return assemble_family(b, std::move(sets));
}

LaminarFamily family_from_debug_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<CommoditySet> sets;
  int b = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (b < 0) b = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != b) throw Error(ErrorKind::SyntaxError, "ragged family line: " + line);
    CommoditySet s;
    for (int k = 0; k < b; ++k) {
      if (line[static_cast<std::size_t>(k)] == '1') {
        s.insert(k);
      } else if (line[static_cast<std::size_t>(k)] != '0') {
        throw Error(ErrorKind::SyntaxError, "bad family line: " + line);
      }
    }
    sets.push_back(s);
  }
  return from_sets(b, std::move(sets));
}

namespace {

// Rooted tree under construction: parent links (-1 root, -2 deleted) and the
// commodity carried by each leaf (-1 for internal nodes).
struct TreeBuffer {
  std::vector<int> parent;
  std::vector<int> leaf;

  LaminarFamily to_family(int b) const {
    std::vector<CommoditySet> sets(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v) {
      if (leaf[v] < 0 || parent[v] == -2) continue;
      for (int u = static_cast<int>(v); u >= 0; u = parent[static_cast<std::size_t>(u)]) {
        sets[static_cast<std::size_t>(u)].insert(leaf[v]);
      }
    }
    std::vector<CommoditySet> live;
    live.reserve(parent.size());
    for (std::size_t v = 0; v < parent.size(); ++v) {
      if (parent[v] != -2) live.push_back(sets[v]);
    }
    return assemble_family(b, std::move(live));
  }
};

TreeBuffer buffer_of(const LaminarFamily& family) {
  TreeBuffer t;
  for (const auto& n : family.nodes()) {
    t.parent.push_back(n.parent);
    t.leaf.push_back(n.set.size() == 1 ? n.set.first() : -1);
  }
  return t;
}

std::size_t pick_pair_second(Rng& rng, std::size_t n, std::size_t first) {
  std::size_t j = static_cast<std::size_t>(uniform_index(rng, n - 1));
  return j >= first ? j + 1 : j;
}

}  // namespace

LaminarFamily random_binarize(const LaminarFamily& family, Rng& rng) {
  std::vector<CommoditySet> sets = family.sets();
  for (const auto& n : family.nodes()) {
    if (n.children.size() < 3) continue;
    std::vector<CommoditySet> kids;
    for (int c : n.children) kids.push_back(family.node(c).set);
    while (kids.size() >= 3) {
      const auto i = static_cast<std::size_t>(uniform_index(rng, kids.size()));
      const auto j = pick_pair_second(rng, kids.size(), i);
      CommoditySet merged = kids[i] | kids[j];
      kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(std::max(i, j)));
      kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(std::min(i, j)));
      kids.push_back(merged);
      sets.push_back(merged);
    }
  }
  return assemble_family(family.commodity_count(), std::move(sets));
}

LaminarFamily random_full_binary(int b, Rng& rng) {
  TreeBuffer t;
  t.parent.push_back(-1);
  t.leaf.push_back(0);
  for (int k = 1; k < b; ++k) {
    // 2k-1 nodes, each owning the edge above it (the root owns the planted edge).
    const auto v = static_cast<int>(uniform_index(rng, t.parent.size()));
    const int w = static_cast<int>(t.parent.size());
    t.parent.push_back(t.parent[static_cast<std::size_t>(v)]);
    t.leaf.push_back(-1);
    t.parent[static_cast<std::size_t>(v)] = w;
    t.parent.push_back(w);
    t.leaf.push_back(k);
  }
  return t.to_family(b);
}

std::vector<LaminarFamily> enumerate_full_binary(int b) {
  std::vector<LaminarFamily> out;
  TreeBuffer t;
  t.parent.push_back(-1);
  t.leaf.push_back(0);
  std::function<void(int)> grow = [&](int k) {
    if (k == b) {
      out.push_back(t.to_family(b));
      return;
    }
    const int nodes = static_cast<int>(t.parent.size());
    for (int v = 0; v < nodes; ++v) {
      const int old_parent = t.parent[static_cast<std::size_t>(v)];
      t.parent.push_back(old_parent);
      t.leaf.push_back(-1);
      t.parent[static_cast<std::size_t>(v)] = nodes;
      t.parent.push_back(nodes);
      t.leaf.push_back(k);
      grow(k + 1);
      t.parent.resize(static_cast<std::size_t>(nodes));
      t.leaf.resize(static_cast<std::size_t>(nodes));
      t.parent[static_cast<std::size_t>(v)] = old_parent;
    }
  };
  grow(1);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

int sibling_of(const LaminarFamily& family, int c) {
  const auto& kids = family.node(family.node(c).parent).children;
  return kids[0] == c ? kids[1] : kids[0];
}

bool regraft_allowed(const LaminarFamily& family, int c, int v) {
  const int p = family.node(c).parent;
  return v != p && v != sibling_of(family, c) && !family.node(v).set.subset_of(family.node(c).set);
}

void require_full_binary(const LaminarFamily& family) {
  if (!family.is_full_binary()) {
    throw std::invalid_argument("SPR moves need a full-binary family");
  }
}

}  // namespace

std::vector<SprMove> spr_moves(const LaminarFamily& family) {
  require_full_binary(family);
  std::vector<SprMove> moves;
  for (int c = 0; c < family.root(); ++c) {
    for (int v = 0; v < family.size(); ++v) {
      if (regraft_allowed(family, c, v)) moves.push_back({family.node(c).set, family.node(v).set});
    }
  }
  return moves;
}

LaminarFamily apply_spr(const LaminarFamily& family, const SprMove& move) {
  require_full_binary(family);
  const int c = family.find(move.pruned);
  const int v = family.find(move.target);
  if (c < 0 || v < 0 || c == family.root() || !regraft_allowed(family, c, v)) {
    throw std::invalid_argument("invalid SPR move");
  }
  TreeBuffer t = buffer_of(family);
  const int p = family.node(c).parent;
  const int s = sibling_of(family, c);
  const int w = static_cast<int>(t.parent.size());
  auto at = [](std::vector<int>& xs, int i) -> int& { return xs[static_cast<std::size_t>(i)]; };

  // Suppress p: the sibling takes its place.
  at(t.parent, s) = at(t.parent, p);
  at(t.parent, p) = -2;
  // Subdivide the edge above v with w and hang the pruned subtree there.
  t.parent.push_back(at(t.parent, v));
  t.leaf.push_back(-1);
  at(t.parent, v) = w;
  at(t.parent, c) = w;
  return t.to_family(family.commodity_count());
}

LaminarFamily spr_neighbor(const LaminarFamily& family, Rng& rng) {
  const int b = family.commodity_count();
  if (b <= 2) throw Error(ErrorKind::NoNeighbor, "a family on " + std::to_string(b) + " commodities has no SPR neighbor");
  require_full_binary(family);
  const int total_nodes = family.size();
  // Pruning c leaves total - |subtree(c)| - 2 regraft candidates.
  auto candidates = [&](int c) {
    return std::max(0, total_nodes - (2 * family.node(c).set.size() - 1) - 2);
  };
  std::uint64_t weight = 0;
  for (int c = 0; c < family.root(); ++c) weight += static_cast<std::uint64_t>(candidates(c));

  for (;;) {
    auto draw = uniform_index(rng, weight);
    int c = 0;
    for (; c < family.root(); ++c) {
      const auto w = static_cast<std::uint64_t>(candidates(c));
      if (draw < w) break;
      draw -= w;
    }
    int v = 0;
    for (;; ++v) {
      if (!regraft_allowed(family, c, v)) continue;
      if (draw == 0) break;
      --draw;
    }
    LaminarFamily next = apply_spr(family, {family.node(c).set, family.node(v).set});
    if (!(next == family)) return next;
  }
}

std::vector<LaminarFamily> spr_neighborhood(const LaminarFamily& family) {
  if (family.commodity_count() <= 2) return {};
  std::set<LaminarFamily> seen;
  for (const SprMove& m : spr_moves(family)) {
    LaminarFamily next = apply_spr(family, m);
    if (!(next == family)) seen.insert(std::move(next));
  }
  return {seen.begin(), seen.end()};
}

LaminarFamily family_from_tree(std::span<const ArcId> tree_arcs, const Instance& instance) {
  if (!is_r_arborescence(tree_arcs, instance)) {
    throw Error(ErrorKind::NotArborescence, "arc set is not an r-arborescence");
  }
  const auto n = static_cast<std::size_t>(instance.node_count());
  const int b = instance.commodity_count();
  std::vector<std::vector<ArcId>> out(n);
  for (ArcId id : tree_arcs) out[static_cast<std::size_t>(instance.arc(id).tail)].push_back(id);

  std::vector<CommoditySet> below(n);
  // Iterative post-order from the root.
  std::vector<std::pair<NodeId, std::size_t>> stack{{instance.root(), 0}};
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto ui = static_cast<std::size_t>(u);
    if (next < out[ui].size()) {
      const NodeId v = instance.arc(out[ui][next++]).head;
      stack.emplace_back(v, 0);
      continue;
    }
    if (instance.is_terminal(u)) below[ui].insert(instance.commodity_of(u));
    for (ArcId id : out[ui]) below[ui] |= below[static_cast<std::size_t>(instance.arc(id).head)];
    stack.pop_back();
  }
  const CommoditySet all = CommoditySet::all(b);
  if (!(below[static_cast<std::size_t>(instance.root())] == all)) {
    throw Error(ErrorKind::NotArborescence, "tree does not reach every terminal");
  }

  std::vector<CommoditySet> sets{all};
  for (int k = 0; k < b; ++k) sets.push_back(CommoditySet::singleton(k));
  for (ArcId id : tree_arcs) {
    const CommoditySet& s = below[static_cast<std::size_t>(instance.arc(id).head)];
    if (!s.empty()) sets.push_back(s);
  }
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return assemble_family(b, std::move(sets));
}

LaminarFamily initial_single_linkage(const Instance& instance, const ApspTable& apsp) {
  const int b = instance.commodity_count();
  struct Link {
    Cost length;
    int u;
    int v;
  };
  std::vector<Link> links;
  for (int u = 0; u < b; ++u) {
    for (int v = u + 1; v < b; ++v) {
      const Cost d = std::min(apsp.dist(instance.terminal(u), instance.terminal(v)),
                              apsp.dist(instance.terminal(v), instance.terminal(u)));
      if (d < kInfinity) links.push_back({d, u, v});
    }
  }
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& c) {
    return std::tie(a.length, a.u, a.v) < std::tie(c.length, c.u, c.v);
  });

  // Kruskal: accepted links arrive in increasing length, and the component of
  // k at that moment is the largest set built so far that contains k.
  std::vector<int> leader(static_cast<std::size_t>(b));
  std::iota(leader.begin(), leader.end(), 0);
  std::vector<CommoditySet> cluster;
  std::vector<CommoditySet> sets;
  for (int k = 0; k < b; ++k) {
    cluster.push_back(CommoditySet::singleton(k));
    sets.push_back(cluster.back());
  }
  std::function<int(int)> root_of = [&](int k) {
    int& l = leader[static_cast<std::size_t>(k)];
    return l == k ? k : (l = root_of(l));
  };
  int merges = 0;
  for (const Link& link : links) {
    const int a = root_of(link.u);
    const int c = root_of(link.v);
    if (a == c) continue;
    leader[static_cast<std::size_t>(c)] = a;
    cluster[static_cast<std::size_t>(a)] |= cluster[static_cast<std::size_t>(c)];
    sets.push_back(cluster[static_cast<std::size_t>(a)]);
    ++merges;
  }
  if (merges != b - 1) {
    throw Error(ErrorKind::DisconnectedTerminals, "terminal metric closure is disconnected");
  }
  return assemble_family(b, std::move(sets));
}

namespace {

double sq_dist(Point a, Point c) { return (a.x - c.x) * (a.x - c.x) + (a.y - c.y) * (a.y - c.y); }

double within_sse(std::span<const Point> points, const std::vector<int>& labels) {
  Point sum[2]{};
  int count[2]{};
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum[labels[i]].x += points[i].x;
    sum[labels[i]].y += points[i].y;
    ++count[labels[i]];
  }
  double sse = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int l = labels[i];
    sse += sq_dist(points[i], {sum[l].x / count[l], sum[l].y / count[l]});
  }
  return sse;
}

}  // namespace

std::vector<int> lloyd_two_means(std::span<const Point> points, Point c0, Point c1) {
  constexpr int kMaxIterations = 100;
  constexpr double kTolerance = 1e-9;
  std::vector<int> labels(points.size(), 0);
  Point centroid[2]{c0, c1};
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    int count[2]{};
    for (std::size_t i = 0; i < points.size(); ++i) {
      labels[i] = sq_dist(points[i], centroid[1]) < sq_dist(points[i], centroid[0]) ? 1 : 0;
      ++count[labels[i]];
    }
    for (int empty = 0; empty < 2 && points.size() >= 2; ++empty) {
      if (count[empty] != 0) continue;
      const Point other = centroid[1 - empty];
      std::size_t far = 0;
      for (std::size_t i = 1; i < points.size(); ++i) {
        if (sq_dist(points[i], other) > sq_dist(points[far], other)) far = i;
      }
      labels[far] = empty;
      count[empty] = 1;
      --count[1 - empty];
    }
    Point next[2]{};
    for (std::size_t i = 0; i < points.size(); ++i) {
      next[labels[i]].x += points[i].x;
      next[labels[i]].y += points[i].y;
    }
    double moved = 0;
    for (int l = 0; l < 2; ++l) {
      if (count[l] == 0) continue;
      next[l].x /= count[l];
      next[l].y /= count[l];
      moved = std::max(moved, std::sqrt(sq_dist(next[l], centroid[l])));
      centroid[l] = next[l];
    }
    if (moved < kTolerance) break;
  }
  return labels;
}

std::vector<int> kmeans_bipartition(std::span<const Point> points, Rng& rng) {
  const std::size_t n = points.size();
  if (n < 2) return std::vector<int>(n, 0);
  const auto i = static_cast<std::size_t>(uniform_index(rng, n));
  const auto j = pick_pair_second(rng, n, i);
  std::vector<int> sampled = lloyd_two_means(points, points[i], points[j]);

  std::size_t far = j;
  for (std::size_t k = 0; k < n; ++k) {
    if (sq_dist(points[k], points[i]) > sq_dist(points[far], points[i])) far = k;
  }
  if (far == j) return sampled;
  std::vector<int> spread = lloyd_two_means(points, points[i], points[far]);
  return within_sse(points, spread) < within_sse(points, sampled) ? spread : sampled;
}

LaminarFamily part_kmeans(const TerminalCoordinates& coords, int b, Rng& rng) {
  if (static_cast<int>(coords.size()) < b) {
    throw Error(ErrorKind::MissingCoordinates,
                "have coordinates for " + std::to_string(coords.size()) + " of " + std::to_string(b) + " commodities");
  }
  for (int k = 0; k < b; ++k) {
    const Point& p = coords[static_cast<std::size_t>(k)];
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(ErrorKind::MissingCoordinates, "commodity " + std::to_string(k) + " has no finite position");
    }
  }
  std::vector<CommoditySet> sets;
  std::function<void(const CommoditySet&)> part = [&](const CommoditySet& s) {
    sets.push_back(s);
    const std::vector<int> members = s.members();
    if (members.size() == 1) return;
    if (members.size() == 2) {
      sets.push_back(CommoditySet::singleton(members[0]));
      sets.push_back(CommoditySet::singleton(members[1]));
      return;
    }
    std::vector<Point> points;
    for (int k : members) points.push_back(coords[static_cast<std::size_t>(k)]);
    const std::vector<int> labels = kmeans_bipartition(points, rng);
    CommoditySet halves[2];
    for (std::size_t i = 0; i < members.size(); ++i) halves[labels[i]].insert(members[i]);
    part(halves[0]);
    part(halves[1]);
  };
  part(CommoditySet::all(b));
  return assemble_family(b, std::move(sets));
}

std::size_t pick_central_root(std::span<const Point> candidates) {
  std::size_t best = 0;
  long best_score = -1;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    long left = 0, right = 0, above = 0, below = 0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
      if (candidates[j].x < candidates[i].x) ++left;
      if (candidates[j].x > candidates[i].x) ++right;
      if (candidates[j].y > candidates[i].y) ++above;
      if (candidates[j].y < candidates[i].y) ++below;
    }
    const long score = std::labs(right - left) + std::labs(above - below);
    if (best_score < 0 || score < best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

}  // namespace dst
