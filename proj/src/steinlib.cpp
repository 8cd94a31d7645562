#include "dst/steinlib.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "dst/error.hpp"

namespace dst {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void syntax(int line, const std::string& what) {
  throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
std::optional<T> to_number(std::string_view s) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

class StpParser {
 public:
  explicit StpParser(std::string_view text) : text_(text) {}

  RawStpInstance parse() {
    std::size_t pos = 0;
    while (pos <= text_.size() && !done_) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no_;
      line(trim(text_.substr(pos, end - pos)));
      pos = end + 1;
    }
    if (!seen_graph_) throw Error(ErrorKind::MissingSection, "no Graph section");
    if (!seen_terminals_) throw Error(ErrorKind::MissingSection, "no Terminals section");
    check_count("Edges", declared_edges_, edges_);
    check_count("Arcs", declared_arcs_, arcs_);
    check_count("Terminals", declared_terminals_, static_cast<long>(raw_.terminals.size()));
    return std::move(raw_);
  }

 private:
  void line(std::string_view text) {
    if (text.empty() || text.front() == '#') return;
    const auto tokens = split_ws(text);
    const std::string key = lower(tokens[0]);
    if (section_.empty()) {
      if (key == "section") {
        if (tokens.size() < 2) syntax(line_no_, "SECTION without a name");
        section_ = lower(tokens[1]);
        if (section_ == "graph") seen_graph_ = true;
        if (section_ == "terminals") seen_terminals_ = true;
      } else if (key == "eof") {
        done_ = true;
      }
      return;  // text outside sections (the magic header line) is ignored
    }
    if (key == "end") {
      section_.clear();
      return;
    }
    if (section_ == "comment") {
      comment(key, text.substr(tokens[0].size()));
    } else if (section_ == "graph") {
      graph(key, tokens);
    } else if (section_ == "terminals") {
      terminals(key, tokens);
    } else if (section_ == "coordinates") {
      coordinates(key, tokens);
    }
  }

  void comment(const std::string& key, std::string_view rest) {
    std::string value(trim(rest));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key == "name") raw_.name = value;
    if (key == "creator") raw_.creator = value;
    if (key == "remark") raw_.remark = value;
  }

  long count_value(const std::vector<std::string_view>& tokens) {
    if (tokens.size() != 2) syntax(line_no_, "expected '<keyword> <count>'");
    auto v = to_number<long>(tokens[1]);
    if (!v || *v < 0) syntax(line_no_, "bad count '" + std::string(tokens[1]) + "'");
    return *v;
  }

  NodeId node_value(std::string_view token) {
    auto v = to_number<long>(token);
    if (!v) syntax(line_no_, "bad node id '" + std::string(token) + "'");
    if (*v < 1 || *v > raw_.nodes) {
      syntax(line_no_, "node id " + std::to_string(*v) + " outside 1.." + std::to_string(raw_.nodes));
    }
    return static_cast<NodeId>(*v - 1);
  }

  double real_value(std::string_view token) {
    auto v = to_number<double>(token);
    if (!v || !std::isfinite(*v)) syntax(line_no_, "bad number '" + std::string(token) + "'");
    return *v;
  }

  void graph(const std::string& key, const std::vector<std::string_view>& tokens) {
    if (key == "nodes") {
      raw_.nodes = static_cast<NodeId>(count_value(tokens));
    } else if (key == "edges") {
      declared_edges_ = count_value(tokens);
    } else if (key == "arcs") {
      declared_arcs_ = count_value(tokens);
    } else if (key == "e" || key == "a") {
      if (tokens.size() != 4) syntax(line_no_, "expected '" + std::string(tokens[0]) + " <u> <v> <cost>'");
      const bool directed = key == "a";
      raw_.links.push_back({node_value(tokens[1]), node_value(tokens[2]), real_value(tokens[3]), directed});
      ++(directed ? arcs_ : edges_);
    } else if (key != "obstacles") {
      syntax(line_no_, "unexpected '" + std::string(tokens[0]) + "' in Graph section");
    }
  }

  void terminals(const std::string& key, const std::vector<std::string_view>& tokens) {
    if (key == "terminals") {
      declared_terminals_ = count_value(tokens);
    } else if (key == "t") {
      if (tokens.size() != 2) syntax(line_no_, "expected 'T <node>'");
      raw_.terminals.push_back(node_value(tokens[1]));
    } else if (key == "root" || key == "rootp") {
      if (tokens.size() != 2) syntax(line_no_, "expected 'Root <node>'");
      raw_.declared_root = node_value(tokens[1]);
    } else {
      syntax(line_no_, "unexpected '" + std::string(tokens[0]) + "' in Terminals section");
    }
  }

  void coordinates(const std::string& key, const std::vector<std::string_view>& tokens) {
    if (key != "dd") return;  // higher-dimensional lines are not used
    if (tokens.size() != 4) syntax(line_no_, "expected 'DD <node> <x> <y>'");
    raw_.coordinates[node_value(tokens[1])] = {real_value(tokens[2]), real_value(tokens[3])};
  }

  static void check_count(const char* what, long declared, long actual) {
    if (declared >= 0 && declared != actual) {
      throw Error(ErrorKind::CountMismatch, std::string(what) + " declares " + std::to_string(declared) +
                                                " but " + std::to_string(actual) + " lines follow");
    }
  }

  std::string_view text_;
  RawStpInstance raw_;
  std::string section_;
  int line_no_ = 0;
  bool done_ = false;
  bool seen_graph_ = false;
  bool seen_terminals_ = false;
  long declared_edges_ = -1;
  long declared_arcs_ = -1;
  long declared_terminals_ = -1;
  long edges_ = 0;
  long arcs_ = 0;
};

}  // namespace

RawStpInstance parse_stp(std::string_view text) { return StpParser(text).parse(); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

RawStpInstance read_stp_file(const std::filesystem::path& path) { return parse_stp(read_text_file(path)); }

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string write_stp(const RawStpInstance& raw) {
  std::ostringstream out;
  out << "33D32945 STP File, STP Format Version 1.0\n\n";
  out << "SECTION Comment\n";
  out << "Name    \"" << raw.name << "\"\n";
  out << "Creator \"" << raw.creator << "\"\n";
  out << "Remark  \"" << raw.remark << "\"\n";
  out << "END\n\n";
  const auto edges = std::count_if(raw.links.begin(), raw.links.end(), [](const StpLink& l) { return !l.directed; });
  const auto arcs = static_cast<long>(raw.links.size()) - edges;
  out << "SECTION Graph\n";
  out << "Nodes " << raw.nodes << "\n";
  if (edges > 0 || arcs == 0) out << "Edges " << edges << "\n";
  if (arcs > 0) out << "Arcs " << arcs << "\n";
  for (const StpLink& l : raw.links) {
    out << (l.directed ? "A " : "E ") << l.u + 1 << ' ' << l.v + 1 << ' ' << format_number(l.cost) << "\n";
  }
  out << "END\n\n";
  out << "SECTION Terminals\n";
  out << "Terminals " << raw.terminals.size() << "\n";
  if (raw.declared_root) out << "Root " << *raw.declared_root + 1 << "\n";
  for (NodeId t : raw.terminals) out << "T " << t + 1 << "\n";
  out << "END\n\n";
  if (raw.has_coordinates()) {
    out << "SECTION Coordinates\n";
    for (const auto& [v, p] : raw.coordinates) {
      out << "DD " << v + 1 << ' ' << format_number(p.x) << ' ' << format_number(p.y) << "\n";
    }
    out << "END\n\n";
  }
  out << "EOF\n";
  return out.str();
}

NodeId resolve_root(const RawStpInstance& raw, RootPolicy policy) {
  if (raw.declared_root) return *raw.declared_root;
  switch (policy.kind) {
    case RootPolicy::Kind::Override:
      if (policy.node < 0 || policy.node >= raw.nodes) {
        throw Error(ErrorKind::InvalidInstance, "root override " + std::to_string(policy.node + 1) + " out of range");
      }
      return policy.node;
    case RootPolicy::Kind::Central: {
      if (!raw.has_coordinates()) throw Error(ErrorKind::NoCoordinates, "central root needs a Coordinates section");
      std::vector<Point> points;
      for (NodeId t : raw.terminals) {
        auto it = raw.coordinates.find(t);
        if (it == raw.coordinates.end()) {
          throw Error(ErrorKind::MissingCoordinates, "terminal " + std::to_string(t + 1) + " has no coordinates");
        }
        points.push_back(it->second);
      }
      if (points.empty()) throw Error(ErrorKind::InvalidInstance, "no terminals");
      // Ties go to the lowest node id.
      std::vector<std::size_t> order(points.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return raw.terminals[a] < raw.terminals[b];
      });
      std::vector<Point> sorted;
      for (std::size_t i : order) sorted.push_back(points[i]);
      return raw.terminals[order[pick_central_root(sorted)]];
    }
    case RootPolicy::Kind::FirstTerminal:
      break;
  }
  if (raw.terminals.empty()) throw Error(ErrorKind::InvalidInstance, "no terminals");
  return raw.terminals.front();
}

Instance to_instance(const RawStpInstance& raw, RootPolicy policy) {
  const NodeId root = resolve_root(raw, policy);
  std::vector<Arc> arcs;
  arcs.reserve(raw.links.size() * 2);
  for (const StpLink& l : raw.links) {
    if (!(l.cost > 0)) {
      throw Error(ErrorKind::NonPositiveCost, "link " + std::to_string(l.u + 1) + "-" + std::to_string(l.v + 1));
    }
    arcs.push_back({l.u, l.v, l.cost});
    if (!l.directed) arcs.push_back({l.v, l.u, l.cost});
  }
  std::vector<NodeId> terminals;
  for (NodeId t : raw.terminals) {
    if (t != root) terminals.push_back(t);
  }
  return build_instance(raw.nodes, std::move(arcs), root, std::move(terminals));
}

TerminalCoordinates terminal_coordinates(const RawStpInstance& raw, const Instance& instance) {
  if (!raw.has_coordinates()) throw Error(ErrorKind::NoCoordinates, "instance has no Coordinates section");
  TerminalCoordinates coords;
  for (NodeId t : instance.terminals()) {
    auto it = raw.coordinates.find(t);
    if (it == raw.coordinates.end()) {
      throw Error(ErrorKind::MissingCoordinates, "terminal " + std::to_string(t + 1) + " has no coordinates");
    }
    coords.push_back(it->second);
  }
  return coords;
}

std::optional<double> ResultRow::gap_percent() const {
  if (!cost || !opt || !(*opt > 0)) return std::nullopt;
  return 100 * (*cost - *opt) / *opt;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string format_ms(double ms) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(3);
  out << ms;
  return out.str();
}

}  // namespace

std::string result_line(const ResultRow& row) {
  std::string line = csv_field(row.instance) + ',' + csv_field(row.algorithm) + ',' + std::to_string(row.iterations) +
                     ',' + std::to_string(row.replications) + ',' + std::to_string(row.seed) + ',';
  line += row.cost ? format_number(*row.cost) : "error:" + row.error;
  line += ',';
  if (row.opt) line += format_number(*row.opt);
  line += ',';
  if (auto gap = row.gap_percent()) line += format_number(*gap);
  line += ',' + std::to_string(row.iters_run) + ',';
  if (row.avg_iter_ms) line += format_ms(*row.avg_iter_ms);
  return line;
}

std::string results_csv(std::span<const ResultRow> rows) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const ResultRow& row : rows) out += result_line(row) + '\n';
  return out;
}

void write_results(std::span<const ResultRow> rows, const std::filesystem::path& path) {
  write_text_file(path, results_csv(rows));
}

std::vector<ResultRow> parse_results(std::string_view text) {
  std::vector<ResultRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto number = [&](const std::string& s) {
    auto v = to_number<double>(s);
    if (!v) syntax(line_no, "bad number '" + s + "'");
    return *v;
  };
  auto integer = [&](const std::string& s) {
    auto v = to_number<long long>(s);
    if (!v) syntax(line_no, "bad integer '" + s + "'");
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kResultsHeader) syntax(line_no, "unexpected results header");
      continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 10) syntax(line_no, "expected 10 fields, got " + std::to_string(f.size()));
    ResultRow row;
    row.instance = f[0];
    row.algorithm = f[1];
    row.iterations = static_cast<int>(integer(f[2]));
    row.replications = static_cast<int>(integer(f[3]));
    auto seed = to_number<std::uint64_t>(f[4]);
    if (!seed) syntax(line_no, "bad seed '" + f[4] + "'");
    row.seed = *seed;
    if (f[5].rfind("error:", 0) == 0) {
      row.error = f[5].substr(6);
    } else {
      row.cost = number(f[5]);
    }
    if (!f[6].empty()) row.opt = number(f[6]);
    row.iters_run = static_cast<int>(integer(f[8]));
    if (!f[9].empty()) row.avg_iter_ms = number(f[9]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) { return parse_results(read_text_file(path)); }

std::string solution_text(const Instance& instance, std::span<const ArcId> arcs) {
  std::string out;
  Cost total = 0;
  for (ArcId id : arcs) {
    const Arc& a = instance.arc(id);
    out += std::to_string(a.tail + 1) + ' ' + std::to_string(a.head + 1) + ' ' + format_number(a.cost) + '\n';
    total += a.cost;
  }
  out += "TOTAL " + format_number(total) + '\n';
  return out;
}

void write_solution(const Instance& instance, std::span<const ArcId> arcs, const std::filesystem::path& path) {
  write_text_file(path, solution_text(instance, arcs));
}

}  // namespace dst
