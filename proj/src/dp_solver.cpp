#include "dst/dp_solver.hpp"

#include <algorithm>
#include <string>

#include "dst/error.hpp"

namespace dst {

int DpCache::intern(int child_a, int child_b) {
  if (next_id_ < 0) next_id_ = kMaxCommodities;
  const auto key = std::minmax(child_a, child_b);
  auto [it, inserted] = ids_.try_emplace({key.first, key.second}, next_id_);
  if (inserted) ++next_id_;
  return it->second;
}

void DpCache::make_room(std::size_t incoming, std::size_t default_limit) {
  const std::size_t limit = max_rows_ != 0 ? max_rows_ : default_limit;
  if (rows_.size() + incoming > limit) rows_.clear();
}

const DpCache::Row* DpCache::find(int subtree) const {
  auto it = rows_.find(subtree);
  return it == rows_.end() ? nullptr : &it->second;
}

const DpCache::Row& DpCache::store(int subtree, Row row) {
  return rows_.insert_or_assign(subtree, std::move(row)).first->second;
}

const std::vector<Cost>& DpCache::terminal_column(const Instance& instance, const ApspTable& apsp, int k) {
  if (columns_.size() < static_cast<std::size_t>(instance.commodity_count())) {
    columns_.resize(static_cast<std::size_t>(instance.commodity_count()));
  }
  auto& column = columns_[static_cast<std::size_t>(k)];
  if (column.empty()) {
    const NodeId t = instance.terminal(k);
    column.resize(static_cast<std::size_t>(instance.node_count()));
    for (NodeId i = 0; i < instance.node_count(); ++i) column[static_cast<std::size_t>(i)] = apsp.dist(i, t);
  }
  return column;
}

namespace {

// Resolves the DP rows of every set of a family through the cache. Row
// pointers stay valid for the lifetime of one evaluation because eviction
// only happens up front.
class StructureEvaluator {
 public:
  StructureEvaluator(const Instance& instance, const ApspTable& apsp, const LaminarFamily& family, DpCache& cache)
      : instance_(instance), apsp_(apsp), family_(family), cache_(cache) {}

  void run(std::size_t max_rows_hint) {
    const int count = family_.size();
    cache_.make_room(static_cast<std::size_t>(count), max_rows_hint);
    ids_.assign(static_cast<std::size_t>(count), -1);
    rows_.assign(static_cast<std::size_t>(count), nullptr);
    for (int v = 0; v < count; ++v) {
      const auto& node = family_.node(v);
      if (node.children.empty()) {
        ids_[static_cast<std::size_t>(v)] = node.set.first();
        continue;
      }
      const int a = node.children[0];
      const int c = node.children[1];
      const int id = cache_.intern(ids_[static_cast<std::size_t>(a)], ids_[static_cast<std::size_t>(c)]);
      ids_[static_cast<std::size_t>(v)] = id;
      const bool root_only = v == family_.root();
      const DpCache::Row* row = cache_.find(id);
      if (row != nullptr && (!row->root_only || root_only)) {
        cache_.count_hit();
      } else {
        cache_.count_miss();
        row = &cache_.store(id, compute_row(a, c, root_only));
      }
      rows_[static_cast<std::size_t>(v)] = row;
    }
  }

  const std::vector<Cost>& z_of(int v) {
    const auto& node = family_.node(v);
    if (node.children.empty()) return cache_.terminal_column(instance_, apsp_, node.set.first());
    return rows_[static_cast<std::size_t>(v)]->z;
  }

  const DpCache::Row* row(int v) const { return rows_[static_cast<std::size_t>(v)]; }

  Cost root_cost() {
    const int r = family_.root();
    return z_of(r)[static_cast<std::size_t>(instance_.root())];
  }

 private:
  DpCache::Row compute_row(int a, int c, bool root_only) {
    const auto n = static_cast<std::size_t>(instance_.node_count());
    const std::vector<Cost>& za = z_of(a);
    const std::vector<Cost>& zc = z_of(c);
    std::vector<Cost> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = za[j] + zc[j];

    DpCache::Row row;
    row.root_only = root_only;
    row.z.assign(n, kInfinity);
    row.split.assign(n, -1);
    auto solve_at = [&](NodeId i) {
      const std::span<const Cost> dist = apsp_.row(i);
      Cost best = kInfinity;
      NodeId arg = -1;
      for (std::size_t j = 0; j < n; ++j) {
        const Cost value = dist[j] + w[j];
        if (value < best) {
          best = value;
          arg = static_cast<NodeId>(j);
        }
      }
      row.z[static_cast<std::size_t>(i)] = best;
      row.split[static_cast<std::size_t>(i)] = arg;
    };
    if (root_only) {
      solve_at(instance_.root());
    } else {
      for (NodeId i = 0; i < static_cast<NodeId>(n); ++i) solve_at(i);
    }
    return row;
  }

  const Instance& instance_;
  const ApspTable& apsp_;
  const LaminarFamily& family_;
  DpCache& cache_;
  std::vector<int> ids_;
  std::vector<const DpCache::Row*> rows_;
};

void require_full_binary(const Instance& instance, const LaminarFamily& family) {
  if (family.commodity_count() != instance.commodity_count()) {
    throw Error(ErrorKind::NotAdmissible, "family commodity count does not match the instance");
  }
  if (!family.is_full_binary()) throw Error(ErrorKind::NotAdmissible, "structure must be full-binary");
}

std::size_t row_budget(const Instance& instance) {
  constexpr std::size_t kBytes = std::size_t{256} << 20;
  const std::size_t per_row = static_cast<std::size_t>(instance.node_count()) * (sizeof(Cost) + sizeof(NodeId));
  return std::max<std::size_t>(4 * static_cast<std::size_t>(instance.commodity_count()), kBytes / per_row);
}

}  // namespace

DpTables compute_tables(const Instance& instance, const ApspTable& apsp, const LaminarFamily& family,
                        DpCache* cache) {
  require_full_binary(instance, family);
  DpCache local;
  DpCache& use = cache != nullptr ? *cache : local;
  StructureEvaluator eval(instance, apsp, family, use);
  eval.run(row_budget(instance));
  DpTables tables;
  const auto n = static_cast<std::size_t>(instance.node_count());
  for (int v = 0; v < family.size(); ++v) {
    tables.sets.push_back(family.node(v).set);
    tables.z.push_back(eval.z_of(v));
    if (const DpCache::Row* row = eval.row(v)) {
      tables.split.push_back(row->split);
    } else {
      tables.split.emplace_back(n, -1);
    }
  }
  return tables;
}

StructuredSolution try_solve_structure(const Instance& instance, const ApspTable& apsp,
                                       const LaminarFamily& family, DpCache* cache) {
  require_full_binary(instance, family);
  DpCache local;
  DpCache& use = cache != nullptr ? *cache : local;
  StructureEvaluator eval(instance, apsp, family, use);
  eval.run(row_budget(instance));

  StructuredSolution solution;
  solution.family = family;
  solution.structured_cost = eval.root_cost();
  if (!(solution.structured_cost < kInfinity)) return solution;

  solution.segments.resize(static_cast<std::size_t>(family.size()));
  std::vector<std::pair<int, NodeId>> stack{{family.root(), instance.root()}};
  while (!stack.empty()) {
    auto [v, start] = stack.back();
    stack.pop_back();
    const auto& node = family.node(v);
    Segment& seg = solution.segments[static_cast<std::size_t>(v)];
    seg.set = node.set;
    seg.from = start;
    if (node.children.empty()) {
      seg.to = instance.terminal(node.set.first());
    } else {
      seg.to = eval.row(v)->split[static_cast<std::size_t>(start)];
      for (int c : node.children) stack.emplace_back(c, seg.to);
    }
    seg.arcs = apsp.path(instance, seg.from, seg.to);
    seg.cost = apsp.dist(seg.from, seg.to);
    solution.support.insert(solution.support.end(), seg.arcs.begin(), seg.arcs.end());
  }
  std::sort(solution.support.begin(), solution.support.end());
  solution.support.erase(std::unique(solution.support.begin(), solution.support.end()), solution.support.end());
  solution.support_cost = total_cost(instance, solution.support);
  return solution;
}

StructuredSolution solve_structure(const Instance& instance, const ApspTable& apsp, const LaminarFamily& family,
                                   DpCache* cache) {
  StructuredSolution solution = try_solve_structure(instance, apsp, family, cache);
  if (!(solution.structured_cost < kInfinity)) {
    throw Error(ErrorKind::Infeasible, "structure cannot be realized in this graph");
  }
  return solution;
}

SteinerTree extract_tree(const StructuredSolution& solution, const Instance& instance) {
  if (is_steiner_tree(solution.support, instance)) {
    return {solution.support, solution.support_cost};
  }
  return prune_steiner_leaves(min_cost_arborescence(solution.support, instance, instance.root()), instance);
}

Improvement improve_solution(const StructuredSolution& solution, const Instance& instance, const ApspTable& apsp,
                             Rng& rng, DpCache* cache) {
  if (is_steiner_tree(solution.support, instance)) {
    return {{solution.support, solution.support_cost}, solution.family, solution, false};
  }
  SteinerTree tree =
      prune_steiner_leaves(min_cost_arborescence(solution.support, instance, instance.root()), instance);
  LaminarFamily family = family_from_tree(tree.arcs, instance);
  if (!family.is_full_binary()) family = random_binarize(family, rng);
  StructuredSolution resolved = solve_structure(instance, apsp, family, cache);
  return {std::move(tree), std::move(family), std::move(resolved), true};
}

}  // namespace dst
