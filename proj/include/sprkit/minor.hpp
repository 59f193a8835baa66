#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sprkit/graph.hpp"

namespace sprkit {

/// Cells V_1..V_k aligned with the terminal order. Vertices in no cell form
/// the implicit unassigned set.
struct PartialPartition {
  std::vector<std::vector<Vertex>> cells;

  std::size_t assigned_count() const {
    std::size_t total = 0;
    for (const auto& c : cells) total += c.size();
    return total;
  }

  friend bool operator==(const PartialPartition&, const PartialPartition&) = default;
};

inline constexpr std::int32_t kUnassigned = -1;

// owner[v] = cell index or kUnassigned. Later cells win on overlap; callers that
// care about overlap run validate_partition first.
inline std::vector<std::int32_t> owner_map(const PartialPartition& p, std::size_t n) {
  std::vector<std::int32_t> owner(n, kUnassigned);
  for (std::size_t j = 0; j < p.cells.size(); ++j)
    for (Vertex v : p.cells[j])
      if (v < n) owner[v] = static_cast<std::int32_t>(j);
  return owner;
}

inline PartialPartition partition_from_owner(const std::vector<std::int32_t>& owner, std::size_t k) {
  PartialPartition p;
  p.cells.resize(k);
  for (std::size_t v = 0; v < owner.size(); ++v)
    if (owner[v] != kUnassigned) p.cells[static_cast<std::size_t>(owner[v])].push_back(static_cast<Vertex>(v));
  return p;
}

enum class PartitionViolation {
  none,
  cell_count,
  vertex_out_of_range,
  overlap,
  missing_terminal,
  disconnected,
  incomplete,
};

inline const char* to_string(PartitionViolation v) {
  switch (v) {
    case PartitionViolation::none: return "none";
    case PartitionViolation::cell_count: return "cell_count";
    case PartitionViolation::vertex_out_of_range: return "vertex_out_of_range";
    case PartitionViolation::overlap: return "overlap";
    case PartitionViolation::missing_terminal: return "missing_terminal";
    case PartitionViolation::disconnected: return "disconnected";
    case PartitionViolation::incomplete: return "incomplete";
  }
  return "unknown";
}

struct PartitionReport {
  PartitionViolation violation = PartitionViolation::none;
  std::size_t cell = 0;
  Vertex vertex = 0;
  std::string message;

  bool ok() const { return violation == PartitionViolation::none; }
  explicit operator bool() const { return ok(); }
};

/// Checks, in order: one cell per terminal, ids in range, pairwise
/// disjointness, t_j in V_j, G[V_j] connected, and (optionally) coverage of V.
/// Reports the first violation found.
inline PartitionReport validate_partition(const WeightedGraph& g, const PartialPartition& p, bool require_complete) {
  const std::size_t n = g.num_vertices();
  const std::size_t k = g.num_terminals();
  auto fail = [](PartitionViolation kind, std::size_t cell, Vertex v, std::string msg) {
    return PartitionReport{kind, cell, v, std::move(msg)};
  };

  if (p.cells.size() != k)
    return fail(PartitionViolation::cell_count, 0, 0,
                "expected " + std::to_string(k) + " cells, got " + std::to_string(p.cells.size()));

  std::vector<std::int32_t> owner(n, kUnassigned);
  for (std::size_t j = 0; j < k; ++j) {
    for (Vertex v : p.cells[j]) {
      if (v >= n) return fail(PartitionViolation::vertex_out_of_range, j, v, "vertex id out of range");
      if (owner[v] != kUnassigned)
        return fail(PartitionViolation::overlap, j, v,
                    "vertex " + std::to_string(v) + " in cells " + std::to_string(owner[v]) + " and " +
                        std::to_string(j));
      owner[v] = static_cast<std::int32_t>(j);
    }
  }

  for (std::size_t j = 0; j < k; ++j) {
    const Vertex t = g.terminal(j);
    if (owner[t] != static_cast<std::int32_t>(j))
      return fail(PartitionViolation::missing_terminal, j, t,
                  "terminal " + std::to_string(t) + " is not in its own cell " + std::to_string(j));
  }

  std::vector<char> seen(n, 0);
  std::vector<Vertex> stack;
  for (std::size_t j = 0; j < k; ++j) {
    const auto cell_id = static_cast<std::int32_t>(j);
    std::size_t reached = 1;
    stack.assign(1, g.terminal(j));
    seen[g.terminal(j)] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(v)) {
        if (!seen[nb.vertex] && owner[nb.vertex] == cell_id) {
          seen[nb.vertex] = 1;
          ++reached;
          stack.push_back(nb.vertex);
        }
      }
    }
    if (reached != p.cells[j].size()) {
      for (Vertex v : p.cells[j])
        if (!seen[v])
          return fail(PartitionViolation::disconnected, j, v,
                      "vertex " + std::to_string(v) + " is not connected to terminal inside cell " +
                          std::to_string(j));
    }
  }

  if (require_complete) {
    for (std::size_t v = 0; v < n; ++v)
      if (owner[v] == kUnassigned)
        return fail(PartitionViolation::incomplete, 0, static_cast<Vertex>(v),
                    "vertex " + std::to_string(v) + " is unassigned");
  }
  return {};
}

class InvalidPartition : public std::invalid_argument {
 public:
  explicit InvalidPartition(PartitionReport report)
      : std::invalid_argument("invalid partition: " + report.message), report_(std::move(report)) {}
  const PartitionReport& report() const { return report_; }

 private:
  PartitionReport report_;
};

struct MinorEdge {
  std::size_t a;  // terminal index, a < b
  std::size_t b;
  double weight;
  std::vector<std::pair<Vertex, Vertex>> provenance;  // original cross edges, (from V_a, from V_b)
};

/// Terminal-centered minor: one vertex per terminal, simple edge set,
/// standard-restriction weights.
struct TerminalMinor {
  std::vector<Vertex> terminals;  // original vertex ids, index = minor vertex
  std::vector<MinorEdge> edges;   // sorted by (a, b)

  std::size_t size() const { return terminals.size(); }
};

/// Contracts each cell of a complete partition into its terminal. An edge
/// (t_a, t_b) exists iff some original edge crosses V_a to V_b; its weight is
/// d_G(t_a, t_b) computed in the original graph.
inline TerminalMinor contract(const WeightedGraph& g, const PartialPartition& p) {
  if (auto report = validate_partition(g, p, true); !report) throw InvalidPartition(std::move(report));

  const auto owner = owner_map(p, g.num_vertices());
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<Vertex, Vertex>>> crossing;
  for (const auto& e : g.edges()) {
    auto a = static_cast<std::size_t>(owner[e.u]);
    auto b = static_cast<std::size_t>(owner[e.v]);
    if (a == b) continue;
    Vertex x = e.u, y = e.v;
    if (a > b) {
      std::swap(a, b);
      std::swap(x, y);
    }
    crossing[{a, b}].emplace_back(x, y);
  }

  TerminalMinor m;
  m.terminals.assign(g.terminals().begin(), g.terminals().end());
  if (crossing.empty()) return m;
  const auto metric = terminal_metric(g);
  for (auto& [key, prov] : crossing) {
    std::sort(prov.begin(), prov.end());
    m.edges.push_back({key.first, key.second, metric(key.first, key.second), std::move(prov)});
  }
  return m;
}

/// All-pairs distances in the minor (Floyd-Warshall; k is small).
inline DistanceMatrix minor_distances(const TerminalMinor& m) {
  const std::size_t k = m.size();
  DistanceMatrix d(k, kUnreachable);
  for (std::size_t i = 0; i < k; ++i) d(i, i) = 0.0;
  for (const auto& e : m.edges) {
    d(e.a, e.b) = std::min(d(e.a, e.b), e.weight);
    d(e.b, e.a) = d(e.a, e.b);
  }
  for (std::size_t via = 0; via < k; ++via)
    for (std::size_t i = 0; i < k; ++i) {
      if (!is_reachable(d(i, via))) continue;
      for (std::size_t j = 0; j < k; ++j) {
        const double candidate = d(i, via) + d(via, j);
        if (candidate < d(i, j)) d(i, j) = candidate;
      }
    }
  return d;
}

/// Voronoi-style baseline: each vertex joins its nearest terminal. Realized as
/// a multi-source shortest-path forest keyed on (distance, terminal index,
/// vertex id), so each vertex inherits the label of the forest parent that
/// settled it and every cell is connected.
inline PartialPartition nearest_terminal_partition(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  const std::size_t k = g.num_terminals();
  using Item = std::tuple<double, std::size_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::vector<std::int32_t> owner(n, kUnassigned);
  for (std::size_t j = 0; j < k; ++j) queue.emplace(0.0, j, g.terminal(j));
  while (!queue.empty()) {
    const auto [d, j, v] = queue.top();
    queue.pop();
    if (owner[v] != kUnassigned) continue;
    owner[v] = static_cast<std::int32_t>(j);
    for (const auto& nb : g.neighbors(v))
      if (owner[nb.vertex] == kUnassigned) queue.emplace(d + nb.weight, j, nb.vertex);
  }
  return partition_from_owner(owner, k);
}

}  // namespace sprkit
