#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "sprkit/ball_growing.hpp"
#include "sprkit/error.hpp"
#include "sprkit/graph.hpp"
#include "sprkit/minor.hpp"
#include "sprkit/parallel.hpp"
#include "sprkit/random.hpp"

namespace sprkit {

inline constexpr double kDefaultThreshold = 0x1.0p48;

/// 2^(k^3) when representable as a double, nullopt otherwise (k >= 11).
inline std::optional<double> cubic_threshold(std::size_t k) {
  const std::size_t e = k * k * k;
  if (e > 1023) return std::nullopt;
  return std::ldexp(1.0, static_cast<int>(e));
}

/// Sorted set of floor(log2 d) over the off-diagonal entries of a metric
/// rescaled to unit minimum.
inline std::vector<int> rounded_distance_powers(const DistanceMatrix& metric) {
  std::set<int> powers;
  for (std::size_t i = 0; i < metric.size(); ++i)
    for (std::size_t j = i + 1; j < metric.size(); ++j) powers.insert(std::ilogb(metric(i, j)));
  return {powers.begin(), powers.end()};
}

struct GapCertificate {
  int m0 = 0;
  std::vector<int> occupied_powers;
};

/// Smallest m0 >= 0 such that no occupied exponent lies in [m0, m0 + k] while
/// some occupied exponent lies below m0 and some above m0 + k. Only the gaps
/// between consecutive occupied exponents are examined.
inline std::optional<GapCertificate> try_find_gap(const std::vector<int>& powers, std::size_t k) {
  std::vector<int> sorted = powers;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto window = static_cast<long long>(k);
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const long long m0 = std::max<long long>(0, static_cast<long long>(sorted[i]) + 1);
    // Window [m0, m0 + k] must end strictly below the next occupied exponent.
    if (m0 > sorted[i] && m0 + window < sorted[i + 1]) return GapCertificate{static_cast<int>(m0), sorted};
  }
  return std::nullopt;
}

class NoGapError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline GapCertificate find_gap(const std::vector<int>& powers, std::size_t k) {
  if (auto gap = try_find_gap(powers, k)) return *gap;
  throw NoGapError("no run of " + std::to_string(k + 1) + " empty exponents separates the terminal distances");
}

/// Components of the threshold graph d < 2^m0 over terminal indices, each
/// sorted, ordered by smallest member. Verifies that the relation is already
/// transitive: every intra-class distance is < 2^m0 and every inter-class
/// distance is >= 2^(m0 + k + 1).
inline std::vector<std::vector<std::size_t>> equivalence_classes(const DistanceMatrix& metric, int m0) {
  const std::size_t k = metric.size();
  const double inner = std::ldexp(1.0, m0);
  const double outer = std::ldexp(1.0, m0 + static_cast<int>(k) + 1);
  std::vector<std::size_t> label(k, k);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t s = 0; s < k; ++s) {
    if (label[s] != k) continue;
    const std::size_t id = classes.size();
    classes.emplace_back();
    std::vector<std::size_t> stack{s};
    label[s] = id;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      classes[id].push_back(x);
      for (std::size_t y = 0; y < k; ++y)
        if (label[y] == k && metric(x, y) < inner) {
          label[y] = id;
          stack.push_back(y);
        }
    }
    std::sort(classes[id].begin(), classes[id].end());
  }
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = x + 1; y < k; ++y) {
      const bool same = label[x] == label[y];
      if (same && !(metric(x, y) < inner))
        throw InvariantViolation("terminals " + std::to_string(x) + " and " + std::to_string(y) +
                                 " are related only through a chain; gap certificate is wrong");
      if (!same && !(metric(x, y) >= outer))
        throw InvariantViolation("terminals " + std::to_string(x) + " and " + std::to_string(y) +
                                 " in different classes are closer than 2^(m0+k+1)");
    }
  return classes;
}

/// Ball around one equivalence class, in the ids of the graph it was built in.
struct SuperTerminal {
  std::vector<std::size_t> terminals;  // terminal indices, sorted
  std::size_t representative = 0;      // lowest terminal index
  std::vector<Vertex> ball;            // sorted vertex ids
  double diameter = 0.0;               // diameter of G[ball]
};

/// Contracts each ball to one vertex. Super-terminals get ids 0..C-1 in the
/// given order and become the terminals; remaining vertices follow in
/// increasing original id. Edges keep their weights; edges inside a ball
/// vanish; parallel edges keep the minimum weight.
struct ContractedGraph {
  WeightedGraph graph;
  std::vector<Vertex> image;               // original vertex -> contracted vertex
  std::vector<Vertex> outside_to_original; // contracted id C + i -> original vertex
};

inline ContractedGraph contract_super_terminals(const WeightedGraph& g, const std::vector<SuperTerminal>& supers) {
  constexpr Vertex kNone = std::numeric_limits<Vertex>::max();
  const std::size_t n = g.num_vertices();
  const auto c = static_cast<Vertex>(supers.size());
  std::vector<Vertex> image(n, kNone);
  for (Vertex s = 0; s < c; ++s)
    for (Vertex v : supers[s].ball) {
      if (image[v] != kNone) throw InvariantViolation("super-terminal balls overlap at vertex " + std::to_string(v));
      image[v] = s;
    }
  std::vector<Vertex> outside;
  for (std::size_t v = 0; v < n; ++v)
    if (image[v] == kNone) {
      image[v] = c + static_cast<Vertex>(outside.size());
      outside.push_back(static_cast<Vertex>(v));
    }

  std::map<std::pair<Vertex, Vertex>, double> merged;
  for (const auto& e : g.edges()) {
    Vertex a = image[e.u], b = image[e.v];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    auto [it, inserted] = merged.try_emplace({a, b}, e.weight);
    if (!inserted) it->second = std::min(it->second, e.weight);
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, w] : merged) edges.push_back({key.first, key.second, w});
  std::vector<Vertex> terminals(c);
  for (Vertex s = 0; s < c; ++s) terminals[s] = s;
  return {WeightedGraph(c + outside.size(), std::move(edges), std::move(terminals)), std::move(image),
          std::move(outside)};
}

/// One level of the recursion, in that level's own units and ids.
struct RecursionLevel {
  std::size_t depth = 0;
  std::size_t num_vertices = 0;
  std::size_t num_terminals = 0;
  double scale = 1.0;          // cumulative: original distance = level distance * scale
  double aspect_ratio = 1.0;
  bool delegated = false;      // aspect ratio within threshold; ball growing ran directly
  bool fallback = false;       // above threshold but no separating gap exists
  int m0 = -1;
  std::vector<int> occupied_powers;
  std::vector<SuperTerminal> super_terminals;
  double diameter_bound = 0.0;  // 2^(m0+1)
  bool balls_disjoint = true;
  bool balls_cover_classes = true;
  bool balls_connected = true;
  bool diameters_within_bound = true;

  bool claims_hold() const {
    return balls_disjoint && balls_cover_classes && balls_connected && diameters_within_bound;
  }
};

struct GeneralOptions {
  double threshold = kDefaultThreshold;
  BallGrowingOptions inner;
};

struct GeneralResult {
  PartialPartition partition;
  std::vector<RecursionLevel> levels;  // in recursion order
  std::size_t outer_iterations = 0;    // summed over all ball-growing calls

  std::size_t recursion_depth() const {
    return static_cast<std::size_t>(std::count_if(levels.begin(), levels.end(), [](const RecursionLevel& l) {
      return !l.delegated && !l.fallback;
    }));
  }
};

namespace detail {

inline double induced_diameter(const WeightedGraph& g, const std::vector<Vertex>& vertices, bool& connected) {
  std::vector<char> inside(g.num_vertices(), 0);
  for (Vertex v : vertices) inside[v] = 1;
  const auto allowed = [&](Vertex v) { return inside[v] != 0; };
  double diam = 0.0;
  connected = true;
  for (Vertex v : vertices) {
    const auto d = shortest_distances(g, v, allowed);
    for (Vertex u : vertices) {
      if (!is_reachable(d[u])) connected = false;
      else diam = std::max(diam, d[u]);
    }
  }
  return diam;
}

// Assigns every vertex of `region` that is not already labelled by growing a
// shortest-path forest out of the labelled vertices of `seeds`. A seed enters
// with key = its distance to its own terminal inside its cell, so the forest
// distance of v is the length of a best path terminal -> own cell -> v. Each
// newly labelled vertex copies its forest parent's label, which keeps every
// cell connected. Ties go to (distance, terminal index, vertex id).
inline void grow_labels(const WeightedGraph& g, const std::vector<Vertex>& seeds, const std::vector<double>& seed_key,
                        const std::vector<char>& in_region, std::vector<std::int32_t>& owner) {
  using Item = std::tuple<double, std::int32_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::vector<char> settled(g.num_vertices(), 0);
  for (std::size_t i = 0; i < seeds.size(); ++i) queue.emplace(seed_key[i], owner[seeds[i]], seeds[i]);
  while (!queue.empty()) {
    const auto [d, label, v] = queue.top();
    queue.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    if (owner[v] == kUnassigned) owner[v] = label;
    for (const auto& nb : g.neighbors(v))
      if (!settled[nb.vertex] && in_region[nb.vertex] && owner[nb.vertex] == kUnassigned)
        queue.emplace(d + nb.weight, label, nb.vertex);
  }
}

class GeneralRunner {
 public:
  GeneralRunner(std::uint64_t seed, const GeneralOptions& opts, std::size_t max_depth)
      : seed_(seed), opts_(opts), max_depth_(max_depth) {}

  PartialPartition run(const WeightedGraph& g, std::size_t depth, double scale_so_far) {
    if (depth > max_depth_) throw InvariantViolation("recursion deeper than the terminal count");
    RecursionLevel level;
    level.depth = depth;
    level.num_vertices = g.num_vertices();
    level.num_terminals = g.num_terminals();

    if (g.num_terminals() < 2) {
      level.delegated = true;
      level.scale = scale_so_far;
      result_.levels.push_back(std::move(level));
      return delegate(g, depth);
    }

    const RescaledGraph rs = rescale_to_unit_min(g);
    const WeightedGraph& h = rs.graph;
    const auto metric = terminal_metric(h);
    level.scale = scale_so_far * rs.scale;
    level.aspect_ratio = aspect_ratio(metric);

    if (level.aspect_ratio <= opts_.threshold) {
      level.delegated = true;
      result_.levels.push_back(std::move(level));
      return delegate(h, depth);
    }

    level.occupied_powers = rounded_distance_powers(metric);
    const auto gap = try_find_gap(level.occupied_powers, g.num_terminals());
    if (!gap) {
      level.fallback = true;
      result_.levels.push_back(std::move(level));
      return delegate(h, depth);
    }
    level.m0 = gap->m0;
    const auto classes = equivalence_classes(metric, gap->m0);
    const double radius = std::ldexp(1.0, gap->m0);
    level.diameter_bound = 2.0 * radius;

    std::vector<char> covered(h.num_vertices(), 0);
    for (const auto& cls : classes) {
      SuperTerminal st;
      st.terminals = cls;
      st.representative = cls.front();
      st.ball = ball(h, h.terminal(st.representative), radius);
      for (Vertex v : st.ball) {
        if (covered[v]) level.balls_disjoint = false;
        covered[v] = 1;
      }
      for (std::size_t t : cls)
        if (!std::binary_search(st.ball.begin(), st.ball.end(), h.terminal(t))) level.balls_cover_classes = false;
      bool connected = true;
      st.diameter = induced_diameter(h, st.ball, connected);
      if (!connected) level.balls_connected = false;
      if (st.diameter > level.diameter_bound) level.diameters_within_bound = false;
      level.super_terminals.push_back(std::move(st));
    }
    if (!level.claims_hold())
      throw InvariantViolation("super-terminal balls at depth " + std::to_string(depth) + " violate their guarantees");

    // Ball growing inside each ball, one derived stream per class.
    const std::vector<SuperTerminal> supers = level.super_terminals;
    struct Inner {
      InducedSubgraph sub;
      BallGrowingResult result;
    };
    auto inner = parallel_map(supers.size(), [&](std::size_t c) -> std::optional<Inner> {
      std::vector<Vertex> local_terminals;
      for (std::size_t t : supers[c].terminals) local_terminals.push_back(h.terminal(t));
      auto sub = induced_subgraph(h, supers[c].ball, local_terminals);
      Rng rng(derive_seed(seed_, depth + 1, c + 1));
      auto res = run_partition(sub.graph, rng, opts_.inner);
      return Inner{std::move(sub), std::move(res)};
    });

    std::vector<std::int32_t> owner(h.num_vertices(), kUnassigned);
    for (std::size_t c = 0; c < supers.size(); ++c) {
      const auto& in = *inner[c];
      result_.outer_iterations += in.result.outer_iterations;
      for (std::size_t local_j = 0; local_j < in.result.partition.cells.size(); ++local_j)
        for (Vertex v : in.result.partition.cells[local_j])
          owner[in.sub.to_parent[v]] = static_cast<std::int32_t>(supers[c].terminals[local_j]);
    }

    const ContractedGraph contracted = contract_super_terminals(h, supers);
    result_.levels.push_back(std::move(level));
    const PartialPartition upper = run(contracted.graph, depth + 1, scale_so_far * rs.scale);

    // Stitch: outside vertices the recursion gave to super-terminal c are
    // spread over the cells of c's terminals by growing out of the ball.
    const std::size_t c_count = supers.size();
    for (std::size_t c = 0; c < c_count; ++c) {
      std::vector<char> region(h.num_vertices(), 0);
      for (Vertex v : upper.cells[c])
        if (v >= c_count) region[contracted.outside_to_original[v - c_count]] = 1;
      std::vector<Vertex> seeds;
      std::vector<double> keys;
      for (std::size_t local_j = 0; local_j < supers[c].terminals.size(); ++local_j) {
        const auto& in = *inner[c];
        const auto& cell = in.result.partition.cells[local_j];
        std::vector<char> in_cell(in.sub.graph.num_vertices(), 0);
        for (Vertex v : cell) in_cell[v] = 1;
        const auto d = shortest_distances(in.sub.graph, in.sub.graph.terminal(local_j),
                                          [&](Vertex v) { return in_cell[v] != 0; });
        for (Vertex v : cell) {
          seeds.push_back(in.sub.to_parent[v]);
          keys.push_back(d[v]);
        }
      }
      grow_labels(h, seeds, keys, region, owner);
    }
    for (std::size_t v = 0; v < owner.size(); ++v)
      if (owner[v] == kUnassigned) throw InvariantViolation("stitching left vertex " + std::to_string(v) + " unassigned");
    return partition_from_owner(owner, h.num_terminals());
  }

  GeneralResult take() { return std::move(result_); }

 private:
  PartialPartition delegate(const WeightedGraph& g, std::size_t depth) {
    Rng rng(depth == 0 ? seed_ : derive_seed(seed_, depth + 1, 0));
    auto res = run_partition(g, rng, opts_.inner);
    result_.outer_iterations += res.outer_iterations;
    return std::move(res.partition);
  }

  std::uint64_t seed_;
  GeneralOptions opts_;
  std::size_t max_depth_;
  GeneralResult result_;
};

}  // namespace detail

/// Recursive ball growing for arbitrary aspect ratio. At each level the
/// weights are rescaled to unit minimum terminal distance. Within the
/// threshold, ball growing runs directly (seeded with `seed` at the top level,
/// so it matches run_partition on the rescaled graph). Above it, terminals
/// are grouped by a power-of-two distance gap, each group's ball is
/// partitioned on its own, balls are contracted to super-terminals, the
/// contracted graph is solved recursively and the result is stitched back.
inline GeneralResult spr_general(const WeightedGraph& g, std::uint64_t seed, const GeneralOptions& opts = {}) {
  detail::GeneralRunner runner(seed, opts, g.num_terminals());
  PartialPartition partition = runner.run(g, 0, 1.0);
  GeneralResult result = runner.take();
  result.partition = std::move(partition);
  return result;
}

}  // namespace sprkit
