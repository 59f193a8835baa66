#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sprkit/error.hpp"

namespace sprkit {

using Vertex = std::uint32_t;

// Distances are plain doubles. An unreachable vertex carries +infinity, which
// never compares equal to a finite distance and is never produced by a sum of
// positive finite weights.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool is_reachable(double d) { return d != kUnreachable; }

struct Edge {
  Vertex u;
  Vertex v;
  double weight;
};

struct Neighbor {
  Vertex vertex;
  double weight;
};

template <class F>
concept VertexFilter = std::predicate<const F&, Vertex>;

struct AllVertices {
  constexpr bool operator()(Vertex) const { return true; }
};

/// Undirected graph with strictly positive edge weights and an ordered list of
/// distinct terminals. Immutable once constructed; the constructor rejects
/// self-loops, duplicate edges, non-positive weights, out-of-range ids and any
/// vertex that no terminal can reach.
class WeightedGraph {
 public:
  WeightedGraph(std::size_t n, std::vector<Edge> edges, std::vector<Vertex> terminals)
      : n_(n), edges_(std::move(edges)), terminals_(std::move(terminals)) {
    if (n_ == 0) throw GraphError("graph must have at least one vertex");
    if (n_ > std::numeric_limits<Vertex>::max()) throw GraphError("too many vertices");
    if (terminals_.empty()) throw GraphError("graph must have at least one terminal");

    terminal_index_.assign(n_, kNoTerminal);
    for (std::size_t j = 0; j < terminals_.size(); ++j) {
      const Vertex t = terminals_[j];
      if (t >= n_) throw GraphError("terminal id " + std::to_string(t) + " out of range");
      if (terminal_index_[t] != kNoTerminal)
        throw GraphError("terminal id " + std::to_string(t) + " listed twice");
      terminal_index_[t] = j;
    }

    std::vector<std::size_t> degree(n_, 0);
    for (auto& e : edges_) {
      if (e.u >= n_ || e.v >= n_)
        throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") has an endpoint out of range");
      if (e.u == e.v) throw GraphError("self-loop at vertex " + std::to_string(e.u));
      if (!(e.weight > 0.0) || !std::isfinite(e.weight))
        throw GraphError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                         ") has a non-positive or non-finite weight");
      if (e.u > e.v) std::swap(e.u, e.v);
      ++degree[e.u];
      ++degree[e.v];
    }

    offsets_.assign(n_ + 1, 0);
    for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    adjacency_.resize(offsets_[n_]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adjacency_[fill[e.u]++] = {e.v, e.weight};
      adjacency_[fill[e.v]++] = {e.u, e.weight};
    }
    for (std::size_t v = 0; v < n_; ++v) {
      auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
      auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
      std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
      auto dup = std::adjacent_find(first, last, [](const Neighbor& a, const Neighbor& b) {
        return a.vertex == b.vertex;
      });
      if (dup != last)
        throw GraphError("duplicate edge (" + std::to_string(v) + ", " + std::to_string(dup->vertex) + ")");
    }

    check_terminal_reachability();
  }

  std::size_t num_vertices() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_terminals() const { return terminals_.size(); }

  // Edges are stored with u < v, in input order.
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Vertex> terminals() const { return terminals_; }
  Vertex terminal(std::size_t j) const { return terminals_.at(j); }

  std::optional<std::size_t> terminal_index(Vertex v) const {
    if (v >= n_ || terminal_index_[v] == kNoTerminal) return std::nullopt;
    return terminal_index_[v];
  }
  bool is_terminal(Vertex v) const { return terminal_index(v).has_value(); }

  // Sorted by neighbor id.
  std::span<const Neighbor> neighbors(Vertex v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  bool contains(Vertex v) const { return v < n_; }

 private:
  static constexpr std::size_t kNoTerminal = std::numeric_limits<std::size_t>::max();

  void check_terminal_reachability() const {
    std::vector<char> seen(n_, 0);
    std::vector<Vertex> stack(terminals_.begin(), terminals_.end());
    for (Vertex t : terminals_) seen[t] = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (const auto& nb : neighbors(v)) {
        if (!seen[nb.vertex]) {
          seen[nb.vertex] = 1;
          stack.push_back(nb.vertex);
        }
      }
    }
    for (std::size_t v = 0; v < n_; ++v)
      if (!seen[v]) throw GraphError("vertex " + std::to_string(v) + " is not reachable from any terminal");
  }

  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<Vertex> terminals_;
  std::vector<std::size_t> terminal_index_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Dense k x k matrix of terminal distances, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t k, double fill = 0.0) : k_(k), data_(k * k, fill) {}

  std::size_t size() const { return k_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * k_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * k_ + j]; }

  // Smallest and largest off-diagonal entries; both are 0 when k < 2.
  double min_off_diagonal() const {
    double best = kUnreachable;
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = i + 1; j < k_; ++j) best = std::min(best, (*this)(i, j));
    return k_ < 2 ? 0.0 : best;
  }
  double max_off_diagonal() const {
    double best = 0.0;
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = i + 1; j < k_; ++j) best = std::max(best, (*this)(i, j));
    return best;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) = default;

 private:
  std::size_t k_ = 0;
  std::vector<double> data_;
};

struct PathWitness {
  std::vector<Vertex> vertices;
  double length = 0.0;
};

namespace detail {

struct ShortestPathTree {
  std::vector<double> dist;
  std::vector<Vertex> parent;  // parent[v] == v for the source and for unreached vertices
};

// Dijkstra restricted to vertices accepted by `allowed`, stopping once the
// frontier passes `radius`. Entries beyond the radius are left unreachable.
// Among equal-length shortest paths the predecessor with the smallest id wins.
template <VertexFilter Allowed>
ShortestPathTree dijkstra(const WeightedGraph& g, Vertex source, const Allowed& allowed,
                          double radius = kUnreachable) {
  const std::size_t n = g.num_vertices();
  ShortestPathTree tree{std::vector<double>(n, kUnreachable), std::vector<Vertex>(n)};
  for (std::size_t v = 0; v < n; ++v) tree.parent[v] = static_cast<Vertex>(v);

  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::vector<char> settled(n, 0);
  tree.dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (settled[v] || d != tree.dist[v]) continue;
    if (d > radius) break;
    settled[v] = 1;
    for (const auto& nb : g.neighbors(v)) {
      const Vertex u = nb.vertex;
      if (settled[u] || !allowed(u)) continue;
      const double candidate = d + nb.weight;
      if (candidate < tree.dist[u]) {
        tree.dist[u] = candidate;
        tree.parent[u] = v;
        queue.emplace(candidate, u);
      } else if (candidate == tree.dist[u] && v < tree.parent[u]) {
        tree.parent[u] = v;
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!settled[v]) {
      tree.dist[v] = kUnreachable;
      tree.parent[v] = static_cast<Vertex>(v);
    }
  }
  return tree;
}

inline void require_vertex(const WeightedGraph& g, Vertex v, const char* what) {
  if (!g.contains(v)) throw std::invalid_argument(std::string(what) + " vertex out of range");
}

}  // namespace detail

/// Shortest-path distances from `source` in the subgraph induced by the
/// vertices accepted by `allowed`. Vertices outside that subgraph, or not
/// connected to `source` inside it, are kUnreachable.
template <VertexFilter Allowed = AllVertices>
std::vector<double> shortest_distances(const WeightedGraph& g, Vertex source, const Allowed& allowed = {}) {
  detail::require_vertex(g, source, "source");
  if (!allowed(source)) throw std::invalid_argument("source vertex is excluded by the filter");
  return detail::dijkstra(g, source, allowed).dist;
}

/// Closed ball {v : d(center, v) <= r} in the subgraph induced by `allowed`,
/// sorted by vertex id. The comparison is exact: radii in this library come
/// from continuous distributions, so boundary ties have probability zero.
template <VertexFilter Allowed = AllVertices>
std::vector<Vertex> ball(const WeightedGraph& g, Vertex center, double r, const Allowed& allowed = {}) {
  detail::require_vertex(g, center, "center");
  if (!allowed(center)) throw std::invalid_argument("center vertex is excluded by the filter");
  if (!(r >= 0.0)) throw std::invalid_argument("ball radius must be nonnegative");
  const auto dist = detail::dijkstra(g, center, allowed, r).dist;
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (dist[v] <= r) out.push_back(static_cast<Vertex>(v));
  return out;
}

/// A shortest u-v path. Deterministic: each vertex's predecessor is the
/// smallest-id vertex through which it is reached at minimum distance.
inline PathWitness shortest_path_witness(const WeightedGraph& g, Vertex u, Vertex v) {
  detail::require_vertex(g, u, "start");
  detail::require_vertex(g, v, "end");
  const auto tree = detail::dijkstra(g, u, AllVertices{});
  if (!is_reachable(tree.dist[v]))
    throw NoPathError("no path between " + std::to_string(u) + " and " + std::to_string(v));
  PathWitness path;
  for (Vertex x = v;; x = tree.parent[x]) {
    path.vertices.push_back(x);
    if (x == u) break;
  }
  std::reverse(path.vertices.begin(), path.vertices.end());
  // Summed along the path so that length matches the traversed weights exactly.
  for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
    for (const auto& nb : g.neighbors(path.vertices[i])) {
      if (nb.vertex == path.vertices[i + 1]) {
        path.length += nb.weight;
        break;
      }
    }
  }
  return path;
}

/// Distances from every terminal to every vertex: row j is the single-source
/// result for terminal j.
inline std::vector<std::vector<double>> terminal_distance_rows(const WeightedGraph& g) {
  std::vector<std::vector<double>> rows;
  rows.reserve(g.num_terminals());
  for (Vertex t : g.terminals()) rows.push_back(shortest_distances(g, t));
  return rows;
}

inline DistanceMatrix terminal_metric(const WeightedGraph& g) {
  const std::size_t k = g.num_terminals();
  DistanceMatrix m(k);
  const auto rows = terminal_distance_rows(g);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = i == j ? 0.0 : rows[i][g.terminal(j)];
  return m;
}

inline double aspect_ratio(const DistanceMatrix& metric) {
  if (metric.size() < 2) throw std::invalid_argument("aspect ratio needs at least two terminals");
  return metric.max_off_diagonal() / metric.min_off_diagonal();
}

/// Largest over smallest distance between distinct terminals.
inline double aspect_ratio(const WeightedGraph& g) {
  if (g.num_terminals() < 2) throw std::invalid_argument("aspect ratio needs at least two terminals");
  return aspect_ratio(terminal_metric(g));
}

inline std::vector<std::vector<double>> all_pairs_distances(const WeightedGraph& g) {
  std::vector<std::vector<double>> out;
  out.reserve(g.num_vertices());
  for (std::size_t v = 0; v < g.num_vertices(); ++v) out.push_back(shortest_distances(g, static_cast<Vertex>(v)));
  return out;
}

/// Induced subgraph on a vertex set together with the id translation. The
/// subgraph's terminals are `terminals` (parent ids) in the given order.
struct InducedSubgraph {
  WeightedGraph graph;
  std::vector<Vertex> to_parent;
};

inline InducedSubgraph induced_subgraph(const WeightedGraph& g, std::span<const Vertex> vertices,
                                        std::span<const Vertex> terminals) {
  constexpr Vertex kAbsent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> local(g.num_vertices(), kAbsent);
  std::vector<Vertex> to_parent(vertices.begin(), vertices.end());
  std::sort(to_parent.begin(), to_parent.end());
  for (std::size_t i = 0; i < to_parent.size(); ++i) local[to_parent[i]] = static_cast<Vertex>(i);

  std::vector<Edge> edges;
  for (const auto& e : g.edges())
    if (local[e.u] != kAbsent && local[e.v] != kAbsent) edges.push_back({local[e.u], local[e.v], e.weight});
  std::vector<Vertex> local_terminals;
  for (Vertex t : terminals) {
    if (local[t] == kAbsent) throw std::invalid_argument("subgraph terminal outside the vertex set");
    local_terminals.push_back(local[t]);
  }
  return {WeightedGraph(to_parent.size(), std::move(edges), std::move(local_terminals)), std::move(to_parent)};
}

/// Same graph with every weight multiplied by `factor`.
inline WeightedGraph scaled(const WeightedGraph& g, double factor) {
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.weight *= factor;
  return WeightedGraph(g.num_vertices(), std::move(edges), std::vector<Vertex>(g.terminals().begin(), g.terminals().end()));
}

}  // namespace sprkit
