#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sprkit/error.hpp"
#include "sprkit/graph.hpp"
#include "sprkit/minor.hpp"

// Edge-list text format:
//
//   n m k
//   u v w        (m lines, 0-based ids, positive decimal weight)
//   t_1 ... t_k  (one line)
//
// Blank lines and lines starting with '#' are ignored.

namespace sprkit {

namespace detail {

class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  bool next_line(std::istringstream& line) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_no_;
      const auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos || text[first] == '#') continue;
      line.clear();
      line.str(text);
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw GraphError("line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

template <class T>
T parse_field(std::istringstream& line, const TokenReader& reader, const char* what) {
  T value{};
  if (!(line >> value)) reader.fail(std::string("expected ") + what);
  return value;
}

inline void expect_end(std::istringstream& line, const TokenReader& reader) {
  std::string extra;
  if (line >> extra) reader.fail("unexpected trailing token '" + extra + "'");
}

}  // namespace detail

inline WeightedGraph read_edge_list(std::istream& in) {
  detail::TokenReader reader(in);
  std::istringstream line;
  if (!reader.next_line(line)) throw GraphError("empty input: missing 'n m k' header");
  const auto n = detail::parse_field<long long>(line, reader, "vertex count n");
  const auto m = detail::parse_field<long long>(line, reader, "edge count m");
  const auto k = detail::parse_field<long long>(line, reader, "terminal count k");
  detail::expect_end(line, reader);
  if (n < 1) reader.fail("vertex count must be at least 1");
  if (m < 0) reader.fail("edge count must be nonnegative");
  if (k < 1 || k > n) reader.fail("terminal count must be in [1, n]");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<long long, long long>> seen;
  for (long long i = 0; i < m; ++i) {
    if (!reader.next_line(line)) reader.fail("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    const auto u = detail::parse_field<long long>(line, reader, "edge endpoint u");
    const auto v = detail::parse_field<long long>(line, reader, "edge endpoint v");
    const auto w = detail::parse_field<double>(line, reader, "edge weight w");
    detail::expect_end(line, reader);
    if (u < 0 || u >= n || v < 0 || v >= n) reader.fail("edge endpoint out of range");
    if (u == v) reader.fail("self-loop at vertex " + std::to_string(u));
    if (!(w > 0.0)) reader.fail("edge weight must be positive");
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second)
      reader.fail("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
  }

  if (!reader.next_line(line)) reader.fail("missing terminal line");
  std::vector<Vertex> terminals;
  for (long long j = 0; j < k; ++j) {
    const auto t = detail::parse_field<long long>(line, reader, "terminal id");
    if (t < 0 || t >= n) reader.fail("terminal id out of range");
    terminals.push_back(static_cast<Vertex>(t));
  }
  detail::expect_end(line, reader);
  if (reader.next_line(line)) reader.fail("unexpected content after terminal line");
  return WeightedGraph(static_cast<std::size_t>(n), std::move(edges), std::move(terminals));
}

inline WeightedGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open " + path);
  return read_edge_list(in);
}

namespace detail {

inline void write_weight(std::ostream& out, double w) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << w;
}

}  // namespace detail

inline void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << ' ' << g.num_terminals() << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v << ' ';
    detail::write_weight(out, e.weight);
    out << '\n';
  }
  for (std::size_t j = 0; j < g.num_terminals(); ++j) out << (j ? " " : "") << g.terminal(j);
  out << '\n';
}

/// A minor in the same format: k vertices, every vertex a terminal, minor
/// vertex j standing for terminal j.
inline void write_minor_edge_list(std::ostream& out, const TerminalMinor& m) {
  out << m.size() << ' ' << m.edges.size() << ' ' << m.size() << '\n';
  for (const auto& e : m.edges) {
    out << e.a << ' ' << e.b << ' ';
    detail::write_weight(out, e.weight);
    out << '\n';
  }
  for (std::size_t j = 0; j < m.size(); ++j) out << (j ? " " : "") << j;
  out << '\n';
}

// Partition format: header "n k", then n lines holding the cell index of each
// vertex (-1 when unassigned).
inline void write_partition(std::ostream& out, const PartialPartition& p, std::size_t n) {
  const auto owner = owner_map(p, n);
  out << n << ' ' << p.cells.size() << '\n';
  for (auto o : owner) out << o << '\n';
}

inline PartialPartition read_partition(std::istream& in) {
  detail::TokenReader reader(in);
  std::istringstream line;
  if (!reader.next_line(line)) throw GraphError("empty partition file");
  const auto n = detail::parse_field<long long>(line, reader, "vertex count");
  const auto k = detail::parse_field<long long>(line, reader, "cell count");
  if (n < 1 || k < 1) reader.fail("partition header needs n >= 1 and k >= 1");
  std::vector<std::int32_t> owner;
  for (long long v = 0; v < n; ++v) {
    if (!reader.next_line(line)) reader.fail("expected " + std::to_string(n) + " cell indices");
    const auto o = detail::parse_field<long long>(line, reader, "cell index");
    if (o < -1 || o >= k) reader.fail("cell index out of range");
    owner.push_back(static_cast<std::int32_t>(o));
  }
  return partition_from_owner(owner, static_cast<std::size_t>(k));
}

}  // namespace sprkit
