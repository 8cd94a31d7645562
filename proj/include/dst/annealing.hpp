#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dst/arborescence.hpp"
#include "dst/graph.hpp"
#include "dst/laminar.hpp"

namespace dst {

enum class Variant { Sa, SaTest, SaRect };
enum class InitialFamily { SingleLinkage, UniformRandom };

std::string_view to_string(Variant v);

struct AnnealingConfig {
  int n_iter = 1000;
  double cooling_rate = 0.95;
  std::uint64_t seed = 0;
  Variant variant = Variant::SaTest;
  int clusterizations = 50;
  int replications = 10;
  InitialFamily initial = InitialFamily::SingleLinkage;
  int threads = 1;  // replications run concurrently when > 1
  bool record_trace = true;
};

struct TraceRecord {
  int iteration = 0;
  double temperature = 0;
  Cost candidate_cost = 0;
  bool accepted = false;
  bool improved_by_tester = false;
  Cost current_cost = 0;
  Cost best_cost = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct RunResult {
  SteinerTree best_tree;
  Cost best_cost = kInfinity;  // best structured cost z(r, K) seen
  Cost initial_cost = kInfinity;
  LaminarFamily best_family;
  std::vector<TraceRecord> trace;
  int iterations_run = 0;
  double total_ms = 0;
  double avg_iter_ms = 0;
  std::uint64_t seed = 0;
};

/// t0 * rate^j
double temperature(double t0, int j, double rate = 0.95);

/// 1 / (1 + exp(delta / t)), exactly 0 once delta / t exceeds 700.
double acceptance_probability(double delta, double t);

/// Plain annealing over SPR neighbors.
RunResult run_sa(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config);

/// Annealing where each candidate goes through improve_solution first.
RunResult run_sa_test(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config);

/// run_sa_test seeded by the cheapest of several recursive 2-means families.
RunResult run_sa_rect(const Instance& instance, const ApspTable& apsp, const TerminalCoordinates& coords,
                      const AnnealingConfig& config);

/// Runs config.variant with seeds seed, seed+1, ... and keeps the cheapest
/// tree (lowest replication index on ties).
RunResult replicate(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config,
                    const TerminalCoordinates* coords = nullptr);

}  // namespace dst
