#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dst/annealing.hpp"
#include "dst/steinlib.hpp"

namespace dst {

struct ProfilePoint {
  std::string algorithm;
  double threshold = 0;
  double fraction = 0;
};

/// 0, 0.25, ..., 5.0
std::vector<double> default_thresholds();

/// Per algorithm (first-appearance order) and threshold, the share of rows
/// with a known optimum whose gap is <= threshold. Error rows count as misses.
/// Throws NoKnownOptima when no row has an optimum.
std::vector<ProfilePoint> performance_profile(std::span<const ResultRow> rows, std::span<const double> thresholds);
std::string profile_csv(std::span<const ProfilePoint> points);

struct ManifestEntry {
  std::filesystem::path path;
  std::optional<Cost> opt;
};

/// `path,opt` lines (optional header); relative paths resolve against the
/// manifest's directory.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

struct SolveRequest {
  std::filesystem::path input;
  std::string algorithm = "sa-test";  // sa | sa-test | sa-rect | shp1 | shp2 | bb
  std::string root = "";              // "" (algorithm default) | auto | central | 1-based node id
  AnnealingConfig config;
  std::optional<Cost> opt;
};

struct SolveOutcome {
  ResultRow row;
  std::vector<ArcId> arcs;
  std::optional<Instance> instance;
  std::string root_note;  // which root was used and why
};

/// Loads, solves and fills a result row. Throws on any failure.
SolveOutcome solve_request(const SolveRequest& request);

int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_profile(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches `solve`, `bench` and `profile`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dst
