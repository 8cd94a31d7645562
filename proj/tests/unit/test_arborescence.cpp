#include <doctest.h>

#include <algorithm>
#include <random>

#include "dst/arborescence.hpp"
#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dst;

TEST_CASE("is_r_arborescence") {
  Instance g = gen::g1();  // arcs: 0 ra, 1 at1, 2 at2, 3 rt1, 4 rt2
  std::vector<ArcId> tree{0, 1, 2};
  CHECK(is_r_arborescence(tree, g));
  CHECK(is_steiner_tree(tree, g));
  std::vector<ArcId> two_in{0, 1, 3};
  CHECK_FALSE(is_r_arborescence(two_in, g));
  CHECK(is_r_arborescence({}, g));
  CHECK_FALSE(is_steiner_tree({}, g));

  // a -> b -> a cycle hanging off nothing
  Instance cyc = build_instance(3, {{0, 1, 1}, {1, 2, 1}, {2, 1, 1}}, 0, {2});
  std::vector<ArcId> loop{1, 2};
  CHECK_FALSE(is_r_arborescence(loop, cyc));
  // into the root
  Instance back = build_instance(2, {{0, 1, 1}, {1, 0, 1}}, 0, {1});
  std::vector<ArcId> both{0, 1};
  CHECK_FALSE(is_r_arborescence(both, back));
  // disconnected piece
  std::vector<ArcId> piece{1};
  CHECK_FALSE(is_r_arborescence(piece, g));
}

TEST_CASE("is_steiner_tree rejects Steiner leaves") {
  // r -> a -> t, a -> x (x not a terminal)
  Instance inst = build_instance(4, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}}, 0, {2});
  std::vector<ArcId> with_leaf{0, 1, 2};
  CHECK(is_r_arborescence(with_leaf, inst));
  CHECK_FALSE(is_steiner_tree(with_leaf, inst));
  SteinerTree pruned = prune_steiner_leaves(with_leaf, inst);
  CHECK(pruned.arcs == std::vector<ArcId>{0, 1});
  CHECK(pruned.cost == 2);
}

TEST_CASE("min_cost_arborescence examples") {
  // diamond: r=0 a=1 b=2 t=3
  Instance d = build_instance(4, {{0, 1, 1}, {0, 2, 2}, {1, 3, 1}, {2, 3, 1}}, 0, {3});
  std::vector<ArcId> all{0, 1, 2, 3};
  auto mca = min_cost_arborescence(all, d, 0);
  std::sort(mca.begin(), mca.end());
  CHECK(mca == std::vector<ArcId>{0, 1, 2});
  CHECK(total_cost(d, mca) == 4);
  SteinerTree t = prune_steiner_leaves(mca, d);
  CHECK(t.arcs == std::vector<ArcId>{0, 2});
  CHECK(t.cost == 2);

  Instance g = gen::g1();
  std::vector<ArcId> tree{0, 1, 2};
  auto same = min_cost_arborescence(tree, g, 0);
  std::sort(same.begin(), same.end());
  CHECK(same == tree);

  // two routes into t: r->t (3) and r->a->t (1+1)
  Instance par = build_instance(3, {{0, 2, 3}, {0, 1, 1}, {1, 2, 1}}, 0, {2});
  std::vector<ArcId> both{0, 1, 2};
  auto pick = min_cost_arborescence(both, par, 0);
  std::sort(pick.begin(), pick.end());
  CHECK(pick == std::vector<ArcId>{1, 2});

  std::vector<ArcId> missing{1};
  CHECK(error_kind([&] { min_cost_arborescence(missing, par, 0); }) == ErrorKind::Unreachable);
}

TEST_CASE("min_cost_arborescence needs contraction") {
  // Cheapest in-arcs of a and b form a cycle a<->b.
  Instance inst = build_instance(3, {{0, 1, 10}, {0, 2, 12}, {1, 2, 1}, {2, 1, 1}}, 0, {1, 2});
  std::vector<ArcId> all{0, 1, 2, 3};
  auto mca = min_cost_arborescence(all, inst, 0);
  CHECK(is_r_arborescence(mca, inst));
  CHECK(total_cost(inst, mca) == 11);
}

TEST_CASE("min_cost_arborescence matches exhaustive search") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    gen::Shape shape;
    shape.nodes = 3 + trial % 6;
    shape.terminals = 1 + trial % (shape.nodes - 1);
    shape.arc_density = 0.2 + 0.1 * (trial % 4);
    Instance inst = gen::random_instance(rng, shape);
    // Random subset that still reaches every terminal: keep all arcs with
    // probability 0.7, fall back to the full set when that breaks reachability.
    std::vector<ArcId> subset;
    for (ArcId a = 0; a < static_cast<ArcId>(inst.arcs().size()); ++a) {
      if (std::bernoulli_distribution(0.7)(rng)) subset.push_back(a);
    }
    std::vector<ArcId> mca;
    try {
      mca = min_cost_arborescence(subset, inst, inst.root());
    } catch (const Error&) {
      subset.clear();
      for (ArcId a = 0; a < static_cast<ArcId>(inst.arcs().size()); ++a) subset.push_back(a);
      mca = min_cost_arborescence(subset, inst, inst.root());
    }
    REQUIRE(is_r_arborescence(mca, inst));
    for (ArcId a : mca) CHECK(std::find(subset.begin(), subset.end(), a) != subset.end());
    CHECK(total_cost(inst, mca) == oracle::brute_min_arborescence(subset, inst, inst.root()));
    SteinerTree t = prune_steiner_leaves(mca, inst);
    CHECK(is_steiner_tree(t.arcs, inst));
    CHECK(t.cost <= total_cost(inst, mca));
  }
}
