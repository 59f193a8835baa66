#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sprkit/graph.hpp"
#include "sprkit/random.hpp"

namespace sprkit {

enum class Family { cycle, grid, random_tree, gnp_weighted, barbell, clusters };
enum class Placement { uniform, spread };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::cycle: return "cycle";
    case Family::grid: return "grid";
    case Family::random_tree: return "random_tree";
    case Family::gnp_weighted: return "gnp_weighted";
    case Family::barbell: return "barbell";
    case Family::clusters: return "clusters";
  }
  return "unknown";
}

inline std::optional<Family> parse_family(const std::string& s) {
  for (Family f : {Family::cycle, Family::grid, Family::random_tree, Family::gnp_weighted, Family::barbell,
                   Family::clusters})
    if (s == to_string(f)) return f;
  return std::nullopt;
}

struct GeneratorParams {
  std::size_t n = 9;       // cycle, random_tree, gnp_weighted
  std::size_t rows = 3;    // grid
  std::size_t cols = 3;
  std::size_t k = 3;       // terminal count (barbell/clusters: 0 = every clique/cluster vertex)
  Placement placement = Placement::spread;
  double p = 0.3;          // gnp edge probability
  double min_weight = 1.0;
  double max_weight = 1.0;
  std::size_t clique = 4;          // barbell side size
  double bridge_weight = 0x1.0p60; // barbell bridge; clusters: bridge i weighs bridge_weight^(i+1)
  std::size_t clusters = 3;
  std::size_t cluster_size = 4;
  std::size_t max_resamples = 100;
};

namespace detail {

// Terminals at floor(j * n / k) for spread, k distinct uniform ids otherwise.
inline std::vector<Vertex> place_terminals(std::size_t n, std::size_t k, Placement placement, Rng& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("terminal count must be in [1, n]");
  std::vector<Vertex> out;
  if (placement == Placement::spread) {
    for (std::size_t j = 0; j < k; ++j) out.push_back(static_cast<Vertex>(j * n / k));
    return out;
  }
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  for (std::size_t j = 0; j < k; ++j) std::swap(all[j], all[j + rng.index(n - j)]);
  out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

inline double draw_weight(const GeneratorParams& p, Rng& rng) {
  return p.min_weight == p.max_weight ? p.min_weight : rng.uniform(p.min_weight, p.max_weight);
}

inline bool connected(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = n;
  for (const auto& e : edges) {
    const auto a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

inline void append_tree(std::vector<Edge>& edges, Vertex offset, std::size_t size, const GeneratorParams& p, Rng& rng) {
  for (std::size_t v = 1; v < size; ++v)
    edges.push_back({static_cast<Vertex>(offset + rng.index(v)), static_cast<Vertex>(offset + v), draw_weight(p, rng)});
}

inline void validate(const GeneratorParams& p) {
  if (!(p.min_weight > 0.0) || p.max_weight < p.min_weight)
    throw std::invalid_argument("weight range must be positive with min <= max");
  if (!(p.p > 0.0) || p.p > 1.0) throw std::invalid_argument("edge probability must be in (0, 1]");
}

}  // namespace detail

/// Seeded instance generator; always returns a connected graph.
inline WeightedGraph generate(Family family, const GeneratorParams& params, std::uint64_t seed) {
  detail::validate(params);
  Rng rng(seed);
  std::vector<Edge> edges;

  switch (family) {
    case Family::cycle: {
      const std::size_t n = params.n;
      if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
      for (std::size_t v = 0; v < n; ++v)
        edges.push_back({static_cast<Vertex>(v), static_cast<Vertex>((v + 1) % n), detail::draw_weight(params, rng)});
      auto terminals = detail::place_terminals(n, params.k, params.placement, rng);
      return WeightedGraph(n, std::move(edges), std::move(terminals));
    }
    case Family::grid: {
      const std::size_t r = params.rows, c = params.cols;
      if (r < 1 || c < 1) throw std::invalid_argument("grid needs rows, cols >= 1");
      auto id = [c](std::size_t i, std::size_t j) { return static_cast<Vertex>(i * c + j); };
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
          if (j + 1 < c) edges.push_back({id(i, j), id(i, j + 1), detail::draw_weight(params, rng)});
          if (i + 1 < r) edges.push_back({id(i, j), id(i + 1, j), detail::draw_weight(params, rng)});
        }
      auto terminals = detail::place_terminals(r * c, params.k, params.placement, rng);
      return WeightedGraph(r * c, std::move(edges), std::move(terminals));
    }
    case Family::random_tree: {
      if (params.n < 1) throw std::invalid_argument("tree needs n >= 1");
      detail::append_tree(edges, 0, params.n, params, rng);
      auto terminals = detail::place_terminals(params.n, params.k, params.placement, rng);
      return WeightedGraph(params.n, std::move(edges), std::move(terminals));
    }
    case Family::gnp_weighted: {
      const std::size_t n = params.n;
      if (n < 1) throw std::invalid_argument("gnp needs n >= 1");
      for (std::size_t attempt = 0; attempt < params.max_resamples; ++attempt) {
        edges.clear();
        for (std::size_t u = 0; u < n; ++u)
          for (std::size_t v = u + 1; v < n; ++v)
            if (rng.uniform() < params.p)
              edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), detail::draw_weight(params, rng)});
        if (detail::connected(n, edges)) {
          auto terminals = detail::place_terminals(n, params.k, params.placement, rng);
          return WeightedGraph(n, std::move(edges), std::move(terminals));
        }
      }
      throw std::runtime_error("gnp sample stayed disconnected after " + std::to_string(params.max_resamples) +
                               " attempts; raise p");
    }
    case Family::barbell: {
      // Two unit-weight cliques on [0, c) and [c, 2c), bridge (c-1, c).
      const std::size_t c = params.clique;
      if (c < 1) throw std::invalid_argument("barbell needs clique >= 1");
      for (std::size_t side = 0; side < 2; ++side)
        for (std::size_t a = 0; a < c; ++a)
          for (std::size_t b = a + 1; b < c; ++b)
            edges.push_back({static_cast<Vertex>(side * c + a), static_cast<Vertex>(side * c + b), 1.0});
      edges.push_back({static_cast<Vertex>(c - 1), static_cast<Vertex>(c), params.bridge_weight});
      std::vector<Vertex> terminals;
      const std::size_t per_side = params.k == 0 || params.k >= 2 * c ? c : std::max<std::size_t>(1, params.k / 2);
      for (std::size_t side = 0; side < 2; ++side)
        for (std::size_t j = 0; j < per_side; ++j) terminals.push_back(static_cast<Vertex>(side * c + j));
      return WeightedGraph(2 * c, std::move(edges), std::move(terminals));
    }
    case Family::clusters: {
      // Random trees of cluster_size vertices with a few chords, chained by
      // bridges of geometrically growing weight.
      const std::size_t count = params.clusters, size = params.cluster_size;
      if (count < 1 || size < 1) throw std::invalid_argument("clusters needs clusters, cluster_size >= 1");
      for (std::size_t c = 0; c < count; ++c) {
        const auto offset = static_cast<Vertex>(c * size);
        detail::append_tree(edges, offset, size, params, rng);
        for (std::size_t extra = 0; extra + 2 < size; ++extra) {
          const auto a = static_cast<Vertex>(offset + rng.index(size));
          const auto b = static_cast<Vertex>(offset + rng.index(size));
          if (a == b) continue;
          const bool dup = std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
            return (e.u == a && e.v == b) || (e.u == b && e.v == a);
          });
          if (!dup) edges.push_back({a, b, detail::draw_weight(params, rng)});
        }
        if (c + 1 < count) {
          const auto from = static_cast<Vertex>(offset + rng.index(size));
          const auto to = static_cast<Vertex>(offset + size + rng.index(size));
          edges.push_back({from, to, std::pow(params.bridge_weight, static_cast<double>(c + 1))});
        }
      }
      const std::size_t per_cluster =
          params.k == 0 || params.k >= count * size ? size : std::max<std::size_t>(1, params.k / count);
      std::vector<Vertex> terminals;
      for (std::size_t c = 0; c < count; ++c)
        for (std::size_t j = 0; j < per_cluster; ++j) terminals.push_back(static_cast<Vertex>(c * size + j * size / per_cluster));
      return WeightedGraph(count * size, std::move(edges), std::move(terminals));
    }
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace sprkit
