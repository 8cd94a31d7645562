#include "dst/annealing.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>
#include <utility>

#include "dst/dp_solver.hpp"
#include "dst/error.hpp"
#include "dst/random.hpp"

namespace dst {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Sa: return "sa";
    case Variant::SaTest: return "sa-test";
    case Variant::SaRect: return "sa-rect";
  }
  return "unknown";
}

double temperature(double t0, int j, double rate) { return t0 * std::pow(rate, j); }

double acceptance_probability(double delta, double t) {
  const double x = delta / t;
  if (x > 700) return 0;
  return 1 / (1 + std::exp(x));
}

namespace {

using Clock = std::chrono::steady_clock;

enum Stream : std::uint64_t { kNeighbor = 1, kAccept = 2, kAux = 3 };

struct Streams {
  explicit Streams(std::uint64_t seed)
      : neighbor(make_stream(seed, kNeighbor)), accept(make_stream(seed, kAccept)), aux(make_stream(seed, kAux)) {}
  Rng neighbor;
  Rng accept;
  Rng aux;
};

void check_config(const AnnealingConfig& config) {
  if (config.n_iter < 1) throw Error(ErrorKind::Usage, "iterations must be at least 1");
  if (!(config.cooling_rate > 0 && config.cooling_rate < 1)) {
    throw Error(ErrorKind::Usage, "cooling rate must lie in (0, 1)");
  }
}

LaminarFamily initial_family(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config,
                             Rng& aux) {
  if (config.initial == InitialFamily::UniformRandom) return random_full_binary(instance.commodity_count(), aux);
  try {
    return initial_single_linkage(instance, apsp);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DisconnectedTerminals) throw;
    return random_full_binary(instance.commodity_count(), aux);
  }
}

RunResult anneal(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config, bool tester,
                 const LaminarFamily& start, Streams& rng, DpCache& cache) {
  RunResult result;
  result.seed = config.seed;
  StructuredSolution current = try_solve_structure(instance, apsp, start, &cache);
  if (!(current.structured_cost < kInfinity)) {
    throw Error(ErrorKind::Infeasible, "initial structure cannot be realized");
  }
  const double t0 = current.structured_cost;
  result.initial_cost = t0;
  StructuredSolution best = current;

  const auto began = Clock::now();
  if (instance.commodity_count() >= 3) {
    for (int j = 1; j <= config.n_iter; ++j) {
      const double t = temperature(t0, j, config.cooling_rate);
      StructuredSolution candidate =
          try_solve_structure(instance, apsp, spr_neighbor(current.family, rng.neighbor), &cache);
      bool improved = false;
      if (tester && candidate.structured_cost < kInfinity) {
        Improvement imp = improve_solution(candidate, instance, apsp, rng.aux, &cache);
        if (imp.improved) {
          candidate = std::move(imp.solution);
          improved = true;
        }
      }
      const Cost c_new = candidate.structured_cost;
      bool accepted = false;
      if (c_new < current.structured_cost) {
        accepted = true;
      } else {
        const double u = uniform_unit(rng.accept);
        accepted = u <= acceptance_probability(c_new - current.structured_cost, t);
      }
      if (accepted) {
        current = std::move(candidate);
        if (current.structured_cost < best.structured_cost) best = current;
      }
      if (config.record_trace) {
        result.trace.push_back({j, t, c_new, accepted, improved, current.structured_cost, best.structured_cost});
      }
      ++result.iterations_run;
    }
  }
  result.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - began).count();
  result.avg_iter_ms = result.iterations_run > 0 ? result.total_ms / result.iterations_run : 0;

  result.best_cost = best.structured_cost;
  result.best_tree = extract_tree(best, instance);
  result.best_family = std::move(best.family);
  return result;
}

}  // namespace

RunResult run_sa(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config) {
  check_config(config);
  Streams rng(config.seed);
  DpCache cache;
  return anneal(instance, apsp, config, false, initial_family(instance, apsp, config, rng.aux), rng, cache);
}

RunResult run_sa_test(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config) {
  check_config(config);
  Streams rng(config.seed);
  DpCache cache;
  return anneal(instance, apsp, config, true, initial_family(instance, apsp, config, rng.aux), rng, cache);
}

RunResult run_sa_rect(const Instance& instance, const ApspTable& apsp, const TerminalCoordinates& coords,
                      const AnnealingConfig& config) {
  check_config(config);
  if (config.clusterizations < 1) throw Error(ErrorKind::Usage, "clusterizations must be at least 1");
  Streams rng(config.seed);
  DpCache cache;
  LaminarFamily seed_family;
  Cost seed_cost = kInfinity;
  for (int c = 0; c < config.clusterizations; ++c) {
    LaminarFamily family = part_kmeans(coords, instance.commodity_count(), rng.aux);
    const Cost cost = try_solve_structure(instance, apsp, family, &cache).structured_cost;
    if (c == 0 || cost < seed_cost) {
      seed_family = std::move(family);
      seed_cost = cost;
    }
  }
  return anneal(instance, apsp, config, true, seed_family, rng, cache);
}

RunResult replicate(const Instance& instance, const ApspTable& apsp, const AnnealingConfig& config,
                    const TerminalCoordinates* coords) {
  if (config.replications < 1) throw Error(ErrorKind::Usage, "replications must be at least 1");
  if (config.variant == Variant::SaRect && coords == nullptr) {
    throw Error(ErrorKind::MissingCoordinates, "sa-rect needs terminal coordinates");
  }
  const auto count = static_cast<std::size_t>(config.replications);
  std::vector<std::optional<RunResult>> results(count);
  std::vector<std::exception_ptr> errors(count);
  auto run_one = [&](std::size_t r) {
    AnnealingConfig one = config;
    one.seed = config.seed + r;
    try {
      switch (config.variant) {
        case Variant::Sa: results[r] = run_sa(instance, apsp, one); break;
        case Variant::SaTest: results[r] = run_sa_test(instance, apsp, one); break;
        case Variant::SaRect: results[r] = run_sa_rect(instance, apsp, *coords, one); break;
      }
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };

  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, config.threads)));
  if (workers <= 1) {
    for (std::size_t r = 0; r < count; ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r; (r = next++) < count;) run_one(r);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < count; ++r) {
    if (results[r]->best_tree.cost < results[best]->best_tree.cost) best = r;
  }
  return std::move(*results[best]);
}

}  // namespace dst
