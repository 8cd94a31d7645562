#include "dst/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dst/baselines.hpp"
#include "dst/error.hpp"

namespace dst {

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 20; ++i) t.push_back(0.25 * i);
  return t;
}

std::vector<ProfilePoint> performance_profile(std::span<const ResultRow> rows, std::span<const double> thresholds) {
  constexpr double kSlack = 1e-9;
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> gaps;  // +inf for error rows
  for (const ResultRow& row : rows) {
    if (!row.opt) continue;
    if (!gaps.contains(row.algorithm)) order.push_back(row.algorithm);
    const auto gap = row.gap_percent();
    gaps[row.algorithm].push_back(gap ? *gap : kInfinity);
  }
  if (order.empty()) throw Error(ErrorKind::NoKnownOptima, "no result row has a known optimum");
  std::vector<ProfilePoint> points;
  for (const std::string& algorithm : order) {
    const auto& g = gaps[algorithm];
    for (double t : thresholds) {
      const auto hit = std::count_if(g.begin(), g.end(), [&](double x) { return x <= t + kSlack; });
      points.push_back({algorithm, t, static_cast<double>(hit) / static_cast<double>(g.size())});
    }
  }
  return points;
}

std::string profile_csv(std::span<const ProfilePoint> points) {
  std::string out = "algorithm,threshold,fraction\n";
  for (const auto& p : points) {
    out += p.algorithm + ',' + format_number(p.threshold) + ',' + format_number(p.fraction) + '\n';
  }
  return out;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest) {
  const std::string text = read_text_file(manifest);
  std::istringstream in(text);
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    std::string path = line.substr(0, comma);
    std::string opt = comma == std::string::npos ? "" : line.substr(comma + 1);
    if (line_no == 1 && path == "path") continue;
    ManifestEntry entry;
    entry.path = path;
    if (entry.path.is_relative()) entry.path = manifest.parent_path() / entry.path;
    if (!opt.empty()) {
      double value = 0;
      auto [ptr, ec] = std::from_chars(opt.data(), opt.data() + opt.size(), value);
      if (ec != std::errc() || ptr != opt.data() + opt.size()) {
        throw Error(ErrorKind::SyntaxError, "manifest line " + std::to_string(line_no) + ": bad optimum '" + opt + "'");
      }
      entry.opt = value;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

namespace {

const std::vector<std::string> kAlgorithms{"sa", "sa-test", "sa-rect", "shp1", "shp2", "bb"};

bool is_annealing(const std::string& algorithm) { return algorithm.rfind("sa", 0) == 0; }

RootPolicy root_policy(const SolveRequest& request, std::string& note) {
  std::string root = request.root;
  if (root.empty()) root = request.algorithm == "sa-rect" ? "central" : "auto";
  if (root == "auto") {
    note = "auto";
    return RootPolicy::first_terminal();
  }
  if (root == "central") {
    note = "central";
    return RootPolicy::central();
  }
  long id = 0;
  auto [ptr, ec] = std::from_chars(root.data(), root.data() + root.size(), id);
  if (ec != std::errc() || ptr != root.data() + root.size() || id < 1) {
    throw Error(ErrorKind::Usage, "--root expects auto, central or a node id, got '" + root + "'");
  }
  note = "override";
  return RootPolicy::override_with(static_cast<NodeId>(id - 1));
}

}  // namespace

SolveOutcome solve_request(const SolveRequest& request) {
  if (std::find(kAlgorithms.begin(), kAlgorithms.end(), request.algorithm) == kAlgorithms.end()) {
    throw Error(ErrorKind::Usage, "unknown algorithm '" + request.algorithm + "'");
  }
  SolveOutcome outcome;
  std::string policy_note;
  const RootPolicy policy = root_policy(request, policy_note);
  const RawStpInstance raw = read_stp_file(request.input);
  const NodeId root = resolve_root(raw, policy);
  outcome.root_note = std::to_string(root + 1) + (raw.declared_root ? " (declared)" : " (" + policy_note + ")");
  outcome.instance.emplace(to_instance(raw, policy));
  const Instance& instance = *outcome.instance;
  const ApspTable apsp = compute_apsp(instance);

  ResultRow& row = outcome.row;
  row.instance = request.input.stem().string();
  row.algorithm = request.algorithm == "bb" ? "bb2" : request.algorithm;
  row.seed = request.config.seed;
  row.opt = request.opt;

  if (is_annealing(request.algorithm)) {
    AnnealingConfig config = request.config;
    config.variant = request.algorithm == "sa" ? Variant::Sa
                     : request.algorithm == "sa-test" ? Variant::SaTest
                                                      : Variant::SaRect;
    std::optional<TerminalCoordinates> coords;
    if (config.variant == Variant::SaRect) coords = terminal_coordinates(raw, instance);
    config.record_trace = false;
    RunResult result = replicate(instance, apsp, config, coords ? &*coords : nullptr);
    outcome.arcs = std::move(result.best_tree.arcs);
    row.cost = result.best_tree.cost;
    row.iterations = config.n_iter;
    row.replications = config.replications;
    row.iters_run = result.iterations_run;
    row.avg_iter_ms = result.avg_iter_ms;
  } else {
    BaselineResult result = request.algorithm == "shp1"   ? shp1(instance, apsp)
                            : request.algorithm == "shp2" ? shp2(instance)
                                                          : best_benchmark(instance, apsp);
    outcome.arcs = std::move(result.arcs);
    row.cost = result.cost;
    row.replications = 1;
  }
  return outcome;
}

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitFailure = 1;

// CLI11 wants the arguments reversed.
int parse(CLI::App& app, const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool& done) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    done = true;
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }
  done = false;
  return 0;
}

void add_run_options(CLI::App& app, SolveRequest& request) {
  app.add_option("--iterations", request.config.n_iter, "annealing iterations")->check(CLI::PositiveNumber);
  app.add_option("--replications", request.config.replications, "independent runs, best kept")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", request.config.seed, "base seed; replication r uses seed + r");
  app.add_option("--root", request.root, "auto | central | 1-based node id");
  app.add_option("--cooling", request.config.cooling_rate, "temperature ratio per iteration")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--clusterizations", request.config.clusterizations, "sa-rect initial 2-means families")
      ->check(CLI::PositiveNumber);
  app.add_option("--init", request.config.initial, "initial family for sa / sa-test")
      ->transform(CLI::CheckedTransformer(std::map<std::string, InitialFamily>{
          {"single-linkage", InitialFamily::SingleLinkage}, {"random", InitialFamily::UniformRandom}}));
}

std::string describe(const ResultRow& row) {
  std::string s = "cost " + (row.cost ? format_number(*row.cost) : "error:" + row.error);
  if (auto gap = row.gap_percent()) s += "\ngap " + format_number(*gap);
  return s;
}

}  // namespace

int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Solve one STP instance", "dst solve"};
  SolveRequest request;
  request.config.n_iter = 1000;
  request.config.replications = 10;
  std::optional<double> opt;
  std::string solution_out, csv_out;
  int threads = 1;
  app.add_option("--input", request.input, "SteinLib STP file")->required();
  app.add_option("--algorithm", request.algorithm, "sa | sa-test | sa-rect | shp1 | shp2 | bb")
      ->check(CLI::IsMember(kAlgorithms));
  add_run_options(app, request);
  app.add_option("--opt", opt, "known optimum, for the gap");
  app.add_option("--solution-out", solution_out, "write the tree here");
  app.add_option("--csv-out", csv_out, "write the result row here");
  app.add_option("--threads", threads, "replications run concurrently")->check(CLI::PositiveNumber);
  bool done = false;
  if (int code = parse(app, args, out, err, done); done) return code;
  request.opt = opt;
  request.config.threads = threads;

  try {
    SolveOutcome outcome = solve_request(request);
    out << "instance " << outcome.row.instance << "\nalgorithm " << outcome.row.algorithm << "\nroot "
        << outcome.root_note << "\n"
        << describe(outcome.row) << "\n";
    if (!solution_out.empty()) write_solution(*outcome.instance, outcome.arcs, solution_out);
    if (!csv_out.empty()) write_results(std::span(&outcome.row, 1), csv_out);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Usage ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int cmd_bench(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Run algorithms over a manifest of instances", "dst bench"};
  SolveRequest base;
  std::string manifest, csv_out;
  std::vector<std::string> algorithms;
  int jobs = 1;
  app.add_option("--manifest", manifest, "CSV of path,opt")->required();
  app.add_option("--algorithm", algorithms, "repeatable")->check(CLI::IsMember(kAlgorithms))->required();
  app.add_option("--csv-out", csv_out, "results CSV")->required();
  app.add_option("--jobs", jobs, "instances solved concurrently")->check(CLI::PositiveNumber);
  add_run_options(app, base);
  bool done = false;
  if (int code = parse(app, args, out, err, done); done) return code;

  std::vector<ManifestEntry> entries;
  try {
    entries = read_manifest(manifest);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  struct Task {
    SolveRequest request;
    ResultRow row;
    std::string note;
    bool ok = false;
  };
  std::vector<Task> tasks;
  for (const auto& entry : entries) {
    for (const auto& algorithm : algorithms) {
      Task task;
      task.request = base;
      task.request.input = entry.path;
      task.request.algorithm = algorithm;
      task.request.opt = entry.opt;
      task.request.config.threads = 1;
      tasks.push_back(std::move(task));
    }
  }
  auto run = [&](Task& task) {
    try {
      SolveOutcome outcome = solve_request(task.request);
      task.row = std::move(outcome.row);
      task.note = outcome.root_note;
      task.ok = true;
    } catch (const std::exception& e) {
      const auto* known = dynamic_cast<const Error*>(&e);
      task.row = ResultRow{};
      task.row.instance = task.request.input.stem().string();
      task.row.algorithm = task.request.algorithm == "bb" ? "bb2" : task.request.algorithm;
      task.row.iterations = is_annealing(task.request.algorithm) ? task.request.config.n_iter : 0;
      task.row.replications = is_annealing(task.request.algorithm) ? task.request.config.replications : 1;
      task.row.seed = task.request.config.seed;
      task.row.opt = task.request.opt;
      task.row.error = known != nullptr ? std::string(to_string(known->kind())) : "Exception";
      task.note = e.what();
    }
  };
  if (jobs <= 1 || tasks.size() <= 1) {
    for (auto& task : tasks) run(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < std::min<int>(jobs, static_cast<int>(tasks.size())); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < tasks.size();) run(tasks[i]);
      });
    }
    for (auto& t : pool) t.join();
  }

  std::vector<ResultRow> rows;
  bool any_ok = false;
  for (const auto& task : tasks) {
    rows.push_back(task.row);
    any_ok = any_ok || task.ok;
    if (task.ok) {
      out << task.row.instance << ' ' << task.row.algorithm << " root " << task.note << ' ' << describe(task.row)
          << '\n';
    } else {
      err << task.row.instance << ' ' << task.row.algorithm << " failed: " << task.note << '\n';
    }
  }
  try {
    write_results(rows, csv_out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return any_ok ? 0 : kExitFailure;
}

int cmd_profile(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Performance profile from a results CSV", "dst profile"};
  std::string csv, out_path;
  std::vector<double> thresholds;
  app.add_option("--csv", csv, "results CSV")->required();
  app.add_option("--out", out_path, "profile CSV")->required();
  app.add_option("--thresholds", thresholds, "gap thresholds in percent")->delimiter(',');
  bool done = false;
  if (int code = parse(app, args, out, err, done); done) return code;
  if (thresholds.empty()) thresholds = default_thresholds();
  std::sort(thresholds.begin(), thresholds.end());
  try {
    const auto rows = read_results(csv);
    const auto points = performance_profile(rows, thresholds);
    write_text_file(out_path, profile_csv(points));
    out << "wrote " << points.size() << " profile points to " << out_path << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const std::string usage = "usage: dst <solve|bench|profile> [options]   (dst <command> --help)\n";
  if (args.empty()) {
    err << usage;
    return kExitUsage;
  }
  const std::vector<std::string> rest(args.begin() + 1, args.end());
  if (args[0] == "solve") return cmd_solve(rest, out, err);
  if (args[0] == "bench") return cmd_bench(rest, out, err);
  if (args[0] == "profile") return cmd_profile(rest, out, err);
  if (args[0] == "--help" || args[0] == "-h") {
    out << usage;
    return 0;
  }
  err << "unknown command '" << args[0] << "'\n" << usage;
  return kExitUsage;
}

}  // namespace dst
