#include "localmech/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "localmech/errors.hpp"

namespace localmech {
namespace {

std::vector<std::int64_t> ParseFields(std::string_view line, std::size_t expected,
                                      std::int64_t line_no) {
  std::vector<std::int64_t> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + end, value);
    if (ec != std::errc() || ptr != line.data() + end) {
      throw FormatError(line_no, "expected an integer, got '" +
                                     std::string(line.substr(pos, end - pos)) + "'");
    }
    fields.push_back(value);
    pos = end;
  }
  if (fields.size() != expected) {
    throw FormatError(line_no, "expected " + std::to_string(expected) + " fields, got " +
                                   std::to_string(fields.size()));
  }
  return fields;
}

}  // namespace

WeightedGraph ParseGraph(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw FormatError(1, "missing header 'n m W'");

  const auto header = ParseFields(lines[0], 3, 1);
  const std::int64_t n = header[0];
  const std::int64_t m = header[1];
  const std::int64_t bound = header[2];
  if (n < 1 || n > (1 << 30)) throw FormatError(1, "node count must be positive");
  if (m < 0) throw FormatError(1, "edge count must be non-negative");
  if (bound < 0) throw FormatError(1, "weight bound must be non-negative");
  if (static_cast<std::int64_t>(lines.size()) < 1 + n + m) {
    throw FormatError(static_cast<std::int64_t>(lines.size()) + 1, "unexpected end of input");
  }
  for (std::size_t i = 1 + n + m; i < lines.size(); ++i) {
    if (!lines[i].empty()) {
      throw FormatError(static_cast<std::int64_t>(i) + 1, "unexpected trailing content");
    }
  }

  std::vector<Weight> weights(n);
  for (std::int64_t v = 0; v < n; ++v) {
    const std::int64_t line_no = v + 2;
    const auto f = ParseFields(lines[1 + v], 2, line_no);
    if (f[0] != v) {
      throw FormatError(line_no, "expected node " + std::to_string(v) + ", got " +
                                     std::to_string(f[0]));
    }
    if (f[1] < 0 || f[1] > bound) throw FormatError(line_no, "weight out of range");
    weights[v] = f[1];
  }

  std::vector<Edge> edges;
  std::vector<std::vector<NodeId>> seen(n);
  for (std::int64_t e = 0; e < m; ++e) {
    const std::int64_t line_no = n + e + 2;
    const auto f = ParseFields(lines[1 + n + e], 2, line_no);
    if (f[0] == f[1]) throw FormatError(line_no, "self-loop");
    if (f[0] > f[1]) throw FormatError(line_no, "edge endpoints must satisfy u < v");
    if (f[0] < 0 || f[1] >= n) throw FormatError(line_no, "edge endpoint out of range");
    const auto u = static_cast<NodeId>(f[0]);
    const auto v = static_cast<NodeId>(f[1]);
    for (NodeId x : seen[u]) {
      if (x == v) throw FormatError(line_no, "duplicate edge");
    }
    seen[u].push_back(v);
    edges.push_back({u, v});
  }
  WeightedGraph g(static_cast<NodeId>(n), std::move(edges), std::move(weights), bound);
  if (auto violation = g.Validate()) throw FormatError(0, *violation);
  return g;
}

WeightedGraph ReadGraphFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(0, "cannot open graph file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseGraph(buffer.str());
}

std::string FormatGraph(const WeightedGraph& g) {
  std::ostringstream out;
  out << g.node_count() << ' ' << g.edge_count() << ' ' << g.weight_bound() << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) out << v << ' ' << g.weight(v) << '\n';
  for (const Edge& e : g.edges()) {
    out << std::min(e.u, e.v) << ' ' << std::max(e.u, e.v) << '\n';
  }
  return out.str();
}

void WriteGraphFile(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write graph file '" + path + "'");
  out << FormatGraph(g);
}

}  // namespace localmech
