#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dst/graph.hpp"
#include "dst/laminar.hpp"

namespace dst {

/// One E (undirected) or A (directed) line. Node ids are 0-based here; the
/// file's 1-based ids are translated when parsing and writing.
struct StpLink {
  NodeId u = 0;
  NodeId v = 0;
  Cost cost = 0;
  bool directed = false;

  friend bool operator==(const StpLink&, const StpLink&) = default;
};

struct RawStpInstance {
  std::string name;
  std::string creator;
  std::string remark;
  NodeId nodes = 0;
  std::vector<StpLink> links;
  std::vector<NodeId> terminals;
  std::optional<NodeId> declared_root;
  std::map<NodeId, Point> coordinates;

  bool has_coordinates() const { return !coordinates.empty(); }
};

/// Parses a SteinLib STP document. Throws SyntaxError, CountMismatch or
/// MissingSection; syntax errors carry the 1-based line number.
RawStpInstance parse_stp(std::string_view text);
RawStpInstance read_stp_file(const std::filesystem::path& path);

/// Serializes back to STP (used for fixtures and round-trip checks).
std::string write_stp(const RawStpInstance& raw);

/// How the root is chosen when the file does not declare one.
struct RootPolicy {
  enum class Kind { FirstTerminal, Override, Central };
  Kind kind = Kind::FirstTerminal;
  NodeId node = 0;  // 0-based, Override only

  static RootPolicy first_terminal() { return {}; }
  static RootPolicy override_with(NodeId v) { return {Kind::Override, v}; }
  static RootPolicy central() { return {Kind::Central, 0}; }
};

/// Root actually chosen, before building the instance. A declared root always
/// wins over the policy.
NodeId resolve_root(const RawStpInstance& raw, RootPolicy policy);

/// Bidirects E links, keeps A links, resolves the root and drops it from the
/// terminal list. Throws NoCoordinates for Central without coordinates and
/// anything build_instance throws.
Instance to_instance(const RawStpInstance& raw, RootPolicy policy);

/// Coordinates of each commodity's terminal. Throws NoCoordinates or
/// MissingCoordinates.
TerminalCoordinates terminal_coordinates(const RawStpInstance& raw, const Instance& instance);

/// One line of the results CSV.
struct ResultRow {
  std::string instance;
  std::string algorithm;
  int iterations = 0;
  int replications = 0;
  std::uint64_t seed = 0;
  std::optional<Cost> cost;  // empty on error rows
  std::string error;         // error kind for failed runs
  std::optional<Cost> opt;
  int iters_run = 0;
  std::optional<double> avg_iter_ms;

  std::optional<double> gap_percent() const;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr std::string_view kResultsHeader =
    "instance,algorithm,iterations,replications,seed,cost,opt,gap_percent,iters_run,avg_iter_ms";

std::string format_number(double value);
std::string result_line(const ResultRow& row);
std::string results_csv(std::span<const ResultRow> rows);
void write_results(std::span<const ResultRow> rows, const std::filesystem::path& path);
std::vector<ResultRow> parse_results(std::string_view text);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

/// "tail head cost" per arc (1-based ids) then "TOTAL <cost>".
std::string solution_text(const Instance& instance, std::span<const ArcId> arcs);
void write_solution(const Instance& instance, std::span<const ArcId> arcs, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace dst
