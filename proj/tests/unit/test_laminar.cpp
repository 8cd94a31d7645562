#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "dst/laminar.hpp"
#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dst;

namespace {

using Sets = std::vector<std::vector<int>>;

// Family on b commodities from its non-trivial sets (0-based); singletons
// and K are added.
LaminarFamily family_with(int b, const Sets& inner) {
  std::vector<CommoditySet> sets{CommoditySet::all(b)};
  for (int k = 0; k < b; ++k) sets.push_back(CommoditySet::singleton(k));
  for (const auto& s : inner) {
    CommoditySet c;
    for (int k : s) c.insert(k);
    sets.push_back(c);
  }
  return from_sets(b, sets);
}

CommoditySet set_of(std::initializer_list<int> ks) { return CommoditySet::of(ks); }

bool valid_full_binary(const LaminarFamily& f) {
  return f.is_full_binary() && oracle::sets_admissible_full_binary(f.sets(), f.commodity_count());
}

}  // namespace

TEST_CASE("from_sets validates laminarity and admissibility") {
  const int b = 3;
  std::vector<CommoditySet> ok{set_of({0}), set_of({1}), set_of({2}), set_of({0, 1}), set_of({0, 1, 2})};
  LaminarFamily f = from_sets(b, ok);
  CHECK(f.size() == 5);
  CHECK(f.is_full_binary());
  CHECK(f.node(f.root()).set == CommoditySet::all(3));
  CHECK(f.node(f.find(set_of({0}))).parent == f.find(set_of({0, 1})));

  auto crossing = ok;
  crossing.push_back(set_of({1, 2}));
  CHECK(error_kind([&] { from_sets(b, crossing); }) == ErrorKind::NotLaminar);

  LaminarFamily star = from_sets(b, {set_of({0}), set_of({1}), set_of({2}), set_of({0, 1, 2})});
  CHECK(star.size() == 4);
  CHECK_FALSE(star.is_full_binary());
  CHECK(star.node(star.root()).children.size() == 3);

  auto dup = ok;
  dup.push_back(set_of({0, 1}));
  CHECK(error_kind([&] { from_sets(b, dup); }) == ErrorKind::DuplicateSet);
  CHECK(error_kind([&] { from_sets(b, {set_of({0}), set_of({1}), set_of({2})}); }) == ErrorKind::NotAdmissible);
  CHECK(error_kind([&] { from_sets(b, {set_of({0}), set_of({1}), set_of({0, 1, 2})}); }) ==
        ErrorKind::NotAdmissible);
}

TEST_CASE("debug string round trip") {
  LaminarFamily f = family_with(4, {{0, 1}, {0, 1, 2}});
  const std::string text = f.to_debug_string();
  CHECK(text.substr(0, 5) == "1000\n");
  CHECK(family_from_debug_string(text) == f);
}

TEST_CASE("random_binarize") {
  Rng rng(3);
  LaminarFamily full = family_with(3, {{0, 1}});
  CHECK(random_binarize(full, rng) == full);

  LaminarFamily star3 = family_with(3, {});
  std::set<std::vector<CommoditySet>> seen;
  for (int i = 0; i < 200; ++i) {
    LaminarFamily out = random_binarize(star3, rng);
    CHECK(valid_full_binary(out));
    seen.insert(out.sets());
  }
  CHECK(seen.size() == 3);

  LaminarFamily star4 = family_with(4, {});
  CHECK(star4.size() == 5);
  CHECK(random_binarize(star4, rng).size() == 7);

  // Mixed arity: every input set survives.
  LaminarFamily mixed = family_with(7, {{0, 1, 2, 3}, {4, 5, 6}});
  for (int i = 0; i < 50; ++i) {
    LaminarFamily out = random_binarize(mixed, rng);
    CHECK(valid_full_binary(out));
    for (const auto& s : mixed.sets()) CHECK(out.contains(s));
  }
}

TEST_CASE("enumerate_full_binary matches the independent enumeration") {
  const std::size_t counts[] = {0, 1, 1, 3, 15, 105, 945};
  for (int b = 1; b <= 6; ++b) {
    auto lib = enumerate_full_binary(b);
    auto ref = oracle::full_binary_set_lists(b);
    REQUIRE(lib.size() == counts[b]);
    REQUIRE(ref.size() == counts[b]);
    for (std::size_t i = 0; i < lib.size(); ++i) CHECK(lib[i].sets() == ref[i]);
  }
}

TEST_CASE("random_full_binary is roughly uniform") {
  Rng rng(17);
  auto all = enumerate_full_binary(4);
  std::map<std::vector<CommoditySet>, int> hits;
  const int draws = 15000;
  for (int i = 0; i < draws; ++i) {
    LaminarFamily f = random_full_binary(4, rng);
    REQUIRE(valid_full_binary(f));
    ++hits[f.sets()];
  }
  CHECK(hits.size() == all.size());
  for (const auto& [sets, count] : hits) {
    CHECK(count > 850);
    CHECK(count < 1150);
  }
}

TEST_CASE("SPR on three commodities") {
  LaminarFamily f = family_with(3, {{0, 1}});
  auto nbrs = spr_neighborhood(f);
  REQUIRE(nbrs.size() == 2);
  std::set<std::vector<CommoditySet>> got{nbrs[0].sets(), nbrs[1].sets()};
  std::set<std::vector<CommoditySet>> want{family_with(3, {{0, 2}}).sets(), family_with(3, {{1, 2}}).sets()};
  CHECK(got == want);

  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    LaminarFamily n = spr_neighbor(f, rng);
    CHECK_FALSE(n == f);
    CHECK(want.count(n.sets()) == 1);
  }
}

TEST_CASE("SPR has no neighbor for two commodities") {
  LaminarFamily f = family_with(2, {});
  Rng rng(1);
  CHECK(error_kind([&] { spr_neighbor(f, rng); }) == ErrorKind::NoNeighbor);
  CHECK(spr_neighborhood(f).empty());
}

TEST_CASE("SPR move of the eight-commodity illustration") {
  // K splits into {k1,k2,k3} and {k4..k8}; the latter into {k4,k5,k6} and {k7,k8}.
  LaminarFamily f = family_with(8, {{0, 1, 2}, {0, 1}, {3, 4, 5, 6, 7}, {3, 4, 5}, {3, 4}, {6, 7}});
  REQUIRE(f.is_full_binary());
  LaminarFamily g = apply_spr(f, {set_of({3, 4, 5}), set_of({0, 1, 2})});
  CHECK(valid_full_binary(g));
  auto before = f.sets(), after = g.sets();
  std::vector<CommoditySet> removed, added;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(), std::back_inserter(removed));
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(), std::back_inserter(added));
  CHECK(removed == std::vector<CommoditySet>{set_of({3, 4, 5, 6, 7})});
  CHECK(added == std::vector<CommoditySet>{set_of({0, 1, 2, 3, 4, 5})});
}

TEST_CASE("SPR neighborhoods are valid, symmetric and connected") {
  for (int b = 3; b <= 5; ++b) {
    auto families = enumerate_full_binary(b);
    std::map<std::vector<CommoditySet>, std::set<std::vector<CommoditySet>>> adj;
    std::size_t min_deg = 1000000, max_deg = 0;
    for (const auto& f : families) {
      auto nbrs = spr_neighborhood(f);
      min_deg = std::min(min_deg, nbrs.size());
      max_deg = std::max(max_deg, nbrs.size());
      for (const auto& n : nbrs) {
        CHECK(valid_full_binary(n));
        CHECK(n.size() == 2 * b - 1);
        CHECK_FALSE(n == f);
        adj[f.sets()].insert(n.sets());
      }
    }
    MESSAGE("b=" << b << " neighborhood size " << min_deg << ".." << max_deg);
    for (const auto& [f, nbrs] : adj) {
      for (const auto& n : nbrs) CHECK(adj[n].count(f) == 1);
    }
    std::set<std::vector<CommoditySet>> reached{families[0].sets()};
    std::queue<std::vector<CommoditySet>> todo;
    todo.push(families[0].sets());
    while (!todo.empty()) {
      auto cur = todo.front();
      todo.pop();
      for (const auto& n : adj[cur]) {
        if (reached.insert(n).second) todo.push(n);
      }
    }
    CHECK(reached.size() == families.size());
  }
}

TEST_CASE("random SPR walks visit every family for small b") {
  for (int b = 3; b <= 4; ++b) {
    Rng rng(static_cast<std::uint64_t>(b));
    LaminarFamily cur = random_full_binary(b, rng);
    std::set<std::vector<CommoditySet>> visited{cur.sets()};
    for (int step = 0; step < 2000; ++step) {
      LaminarFamily next = spr_neighbor(cur, rng);
      auto nbrs = spr_neighborhood(cur);
      CHECK(std::find(nbrs.begin(), nbrs.end(), next) != nbrs.end());
      cur = next;
      visited.insert(cur.sets());
    }
    CHECK(visited.size() == enumerate_full_binary(b).size());
  }
}

TEST_CASE("family_from_tree") {
  // star: r=0 to terminals 1,2,3
  Instance star = build_instance(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}, 0, {1, 2, 3});
  std::vector<ArcId> all{0, 1, 2};
  CHECK(family_from_tree(all, star) == family_with(3, {}));

  // r -> v -> u -> {t1, t2}; v -> t3
  Instance three = build_instance(6, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {1, 5, 1}}, 0, {3, 4, 5});
  std::vector<ArcId> tree{0, 1, 2, 3, 4};
  LaminarFamily f = family_from_tree(tree, three);
  CHECK(f.sets() == family_with(3, {{0, 1}}).sets());

  // Long shared trunk before the split: K appears once.
  Instance trunk = build_instance(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {2, 4, 1}}, 0, {3, 4});
  std::vector<ArcId> t2{0, 1, 2, 3};
  CHECK(family_from_tree(t2, trunk).size() == 3);

  Instance two_in = build_instance(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}}, 0, {2});
  std::vector<ArcId> bad{0, 1, 2};
  CHECK(error_kind([&] { family_from_tree(bad, two_in); }) == ErrorKind::NotArborescence);
  std::vector<ArcId> partial{0};
  CHECK(error_kind([&] { family_from_tree(partial, two_in); }) == ErrorKind::NotArborescence);
}

TEST_CASE("family_from_tree recovers the family of its own tree") {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const int b = 2 + trial % 6;
    LaminarFamily fam = random_full_binary(b, rng);
    // Graph node v+1 per family node v plus the root r = 0; leaves are terminals.
    const int m = fam.size();
    std::vector<Arc> arcs{{0, fam.root() + 1, 1}};
    for (int v = 0; v < m; ++v) {
      const int p = fam.node(v).parent;
      if (p >= 0) arcs.push_back({p + 1, v + 1, 1});
    }
    std::vector<NodeId> terms(static_cast<std::size_t>(b));
    for (int v = 0; v < m; ++v) {
      if (fam.node(v).set.size() == 1) terms[static_cast<std::size_t>(fam.node(v).set.first())] = v + 1;
    }
    Instance inst = build_instance(m + 1, arcs, 0, terms);
    std::vector<ArcId> ids(arcs.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<ArcId>(i);
    CHECK(family_from_tree(ids, inst) == fam);
  }
}

TEST_CASE("single linkage initializer") {
  // r=0, t1=1, t2=2, t3=3; closure distances 1 (t1,t2), 2 (t2,t3), 3 (t1,t3).
  std::vector<UndirectedEdge> edges{{0, 1, 10}, {0, 2, 10}, {0, 3, 10}, {1, 2, 1}, {2, 3, 2}};
  Instance inst = build_instance(4, bidirect(edges), 0, {1, 2, 3});
  ApspTable apsp = compute_apsp(inst);
  CHECK(initial_single_linkage(inst, apsp) == family_with(3, {{0, 1}}));

  Instance one = build_instance(2, {{0, 1, 1}}, 0, {1});
  LaminarFamily f1 = initial_single_linkage(one, compute_apsp(one));
  CHECK(f1.size() == 1);
  CHECK(f1.node(0).set == CommoditySet::all(1));

  Instance two = build_instance(3, {{0, 1, 1}, {0, 2, 1}, {1, 2, 4}}, 0, {1, 2});
  CHECK(initial_single_linkage(two, compute_apsp(two)) == family_with(2, {}));

  // No path between t1 and t2 in either direction.
  Instance apart = build_instance(3, {{0, 1, 1}, {0, 2, 1}}, 0, {1, 2});
  CHECK(error_kind([&] { initial_single_linkage(apart, compute_apsp(apart)); }) ==
        ErrorKind::DisconnectedTerminals);

  std::mt19937_64 g(4);
  for (int trial = 0; trial < 30; ++trial) {
    gen::Shape shape;
    shape.nodes = 12;
    shape.terminals = 2 + trial % 8;
    Instance inst2 = gen::random_undirected(g, shape);
    CHECK(valid_full_binary(initial_single_linkage(inst2, compute_apsp(inst2))));
  }
}

TEST_CASE("two-means splits separated clusters") {
  std::vector<Point> pts{{0, 0}, {0, 1}, {10, 0}, {10, 1}};
  // Lloyd from any pair straddling the gap.
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 2; j < 4; ++j) {
      auto labels = lloyd_two_means(pts, pts[i], pts[j]);
      CHECK(labels[0] == labels[1]);
      CHECK(labels[2] == labels[3]);
      CHECK(labels[0] != labels[2]);
    }
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    auto labels = kmeans_bipartition(pts, rng);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[2] == labels[3]);
    CHECK(labels[0] != labels[2]);
    Rng rng2(seed);
    CHECK(part_kmeans(pts, 4, rng2) == family_with(4, {{0, 1}, {2, 3}}));
  }
}

TEST_CASE("part_kmeans base cases and validity") {
  Rng rng(2);
  std::vector<Point> one{{3, 4}};
  CHECK(part_kmeans(one, 1, rng).size() == 1);
  std::vector<Point> two{{0, 0}, {5, 5}};
  CHECK(part_kmeans(two, 2, rng) == family_with(2, {}));
  CHECK(error_kind([&] { part_kmeans(two, 3, rng); }) == ErrorKind::MissingCoordinates);

  std::uniform_real_distribution<double> coord(0, 100);
  std::mt19937_64 g(8);
  for (int trial = 0; trial < 50; ++trial) {
    const int b = 1 + trial % 20;
    std::vector<Point> pts;
    for (int k = 0; k < b; ++k) pts.push_back({std::round(coord(g)), std::round(coord(g) / 10)});
    CHECK(valid_full_binary(part_kmeans(pts, b, rng)));
  }
  std::vector<Point> same(5, Point{1, 1});
  CHECK(valid_full_binary(part_kmeans(same, 5, rng)));
}

TEST_CASE("pick_central_root") {
  std::vector<Point> line{{0, 0}, {1, 0}, {2, 0}};
  CHECK(pick_central_root(line) == 1);
  std::vector<Point> single{{7, 7}};
  CHECK(pick_central_root(single) == 0);
  std::vector<Point> pair{{0, 0}, {1, 1}};
  CHECK(pick_central_root(pair) == 0);
  // Plus shape: the centre has two terminals on each side.
  std::vector<Point> plus{{0, 2}, {1, 2}, {2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 2}, {4, 2}};
  CHECK(pick_central_root(plus) == 4);
}
