#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sprkit/graph.hpp"
#include "sprkit/minor.hpp"
#include "sprkit/parallel.hpp"
#include "sprkit/random.hpp"

namespace sprkit {

/// Exponential law with scale lambda conditioned on [0, delta).
struct TruncExpParams {
  double lambda;
  double delta;

  void validate() const {
    if (!(lambda > 0.0) || !(delta > 0.0) || !std::isfinite(lambda) || !std::isfinite(delta))
      throw std::invalid_argument("truncated exponential needs lambda > 0 and delta > 0");
  }
};

// Base-2 logarithm of the terminal count, the scale used for lambda = delta / log k.
inline double log2_terminals(std::size_t k) { return std::log2(static_cast<double>(k)); }

inline double texp_cdf(const TruncExpParams& p, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= p.delta) return 1.0;
  return -std::expm1(-x / p.lambda) / -std::expm1(-p.delta / p.lambda);
}

/// Inverse-CDF draw: x = -lambda * ln(1 - U (1 - e^{-delta/lambda})).
/// Always lands in [0, delta).
template <UniformSource U>
double sample_texp(const TruncExpParams& p, U& source) {
  const double u = source.uniform();
  const double mass = -std::expm1(-p.delta / p.lambda);
  const double x = -p.lambda * std::log1p(-u * mass);
  // Rounding can push x onto delta when u is within an ulp of 1.
  return x < p.delta ? x : std::nextafter(p.delta, 0.0);
}

/// Pr[R >= max(0, delta - 2 lambda)] for R ~ texp(lambda = delta / log2 k, delta):
/// the chance that a terminal farther than delta - 2 lambda from a path can
/// still reach it. Independent of delta.
inline double far_ball_probability(std::size_t k, double delta) {
  if (k < 2) throw std::invalid_argument("far_ball_probability needs k >= 2");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const TruncExpParams p{delta / log2_terminals(k), delta};
  const double lower = std::max(0.0, delta - 2.0 * p.lambda);
  return 1.0 - texp_cdf(p, lower);
}

/// One carving: cells[j] = S_j (possibly empty), aligned with terminals.
struct Carving {
  PartialPartition partition;
  std::vector<double> radii;

  std::vector<std::vector<Vertex>> clusters() const {
    std::vector<std::vector<Vertex>> out;
    for (const auto& c : partition.cells)
      if (!c.empty()) out.push_back(c);
    return out;
  }
};

inline TruncExpParams carving_params(std::size_t k, double delta) {
  // With a single terminal log k = 0; fall back to lambda = delta.
  const double lambda = k >= 2 ? delta / log2_terminals(k) : delta;
  TruncExpParams p{lambda, delta};
  p.validate();
  return p;
}

/// Ball carving in terminal order over precomputed terminal distance rows:
/// R_j ~ texp(delta / log2 k, delta), S_j = B(t_j, R_j) minus all earlier balls.
template <UniformSource U>
Carving carve(const std::vector<std::vector<double>>& terminal_rows, double delta, U& source) {
  const std::size_t k = terminal_rows.size();
  if (k == 0) throw std::invalid_argument("carve needs at least one terminal");
  const std::size_t n = terminal_rows.front().size();
  const TruncExpParams params = carving_params(k, delta);

  Carving out;
  out.partition.cells.resize(k);
  out.radii.resize(k);
  std::vector<char> taken(n, 0);
  for (std::size_t j = 0; j < k; ++j) {
    const double r = sample_texp(params, source);
    out.radii[j] = r;
    const auto& row = terminal_rows[j];
    for (std::size_t v = 0; v < n; ++v) {
      if (!taken[v] && row[v] <= r) {
        taken[v] = 1;
        out.partition.cells[j].push_back(static_cast<Vertex>(v));
      }
    }
  }
  return out;
}

template <UniformSource U>
Carving carve(const WeightedGraph& g, double delta, U& source) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return carve(terminal_distance_rows(g), delta, source);
}

/// Number of cells that meet the path.
inline std::size_t degree_of_separation(const PartialPartition& p, const PathWitness& path) {
  std::size_t count = 0;
  for (const auto& cell : p.cells) {
    const bool meets = std::any_of(cell.begin(), cell.end(), [&](Vertex v) {
      return std::find(path.vertices.begin(), path.vertices.end(), v) != path.vertices.end();
    });
    if (meets) ++count;
  }
  return count;
}

// Faster variant over an owner map; unassigned vertices do not count.
inline std::size_t degree_of_separation(const std::vector<std::int32_t>& owner, const PathWitness& path,
                                        std::vector<char>& scratch) {
  std::size_t count = 0;
  for (Vertex v : path.vertices) {
    const auto c = owner[v];
    if (c == kUnassigned || scratch[static_cast<std::size_t>(c)]) continue;
    scratch[static_cast<std::size_t>(c)] = 1;
    ++count;
  }
  for (Vertex v : path.vertices)
    if (owner[v] != kUnassigned) scratch[static_cast<std::size_t>(owner[v])] = 0;
  return count;
}

struct PairSeparation {
  Vertex x = 0;
  Vertex y = 0;
  double distance = 0.0;
  std::size_t separated = 0;
  double frequency = 0.0;
};

struct PathConcentration {
  std::size_t from = 0;  // terminal indices
  std::size_t to = 0;
  double length = 0.0;
  std::size_t vertex_count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> tail;  // tail[t] = Pr[Z_P > t], t = 0..max_tail
};

struct DecompositionStats {
  std::size_t trials = 0;
  double delta = 0.0;
  double beta = 0.0;  // 4 log2 k
  std::size_t clusters_checked = 0;
  std::size_t diameter_violations = 0;
  double max_cluster_diameter = 0.0;
  std::size_t cover_violations = 0;
  std::vector<PairSeparation> pairs;
  std::vector<PathConcentration> paths;
  std::vector<double> zp_histogram;  // aggregated over paths: Pr[Z_P > t]
};

struct DecompositionOptions {
  std::size_t random_pairs = 50;
  std::size_t max_tail = 8;
};

/// Monte-Carlo check of the carving's decomposition guarantees. Tested pairs
/// are all terminal pairs plus `random_pairs` uniform vertex pairs; tested
/// paths are the deterministic shortest paths between terminal pairs. Trial i
/// draws from Rng(derive_seed(seed, i)).
inline DecompositionStats verify_decomposition(const WeightedGraph& g, double delta, std::size_t trials,
                                               std::uint64_t seed, const DecompositionOptions& opts = {}) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const std::size_t n = g.num_vertices();
  const std::size_t k = g.num_terminals();
  const auto rows = terminal_distance_rows(g);
  const auto apsp = all_pairs_distances(g);

  DecompositionStats stats;
  stats.trials = trials;
  stats.delta = delta;
  stats.beta = k >= 2 ? 4.0 * log2_terminals(k) : 0.0;

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const Vertex x = g.terminal(i), y = g.terminal(j);
      stats.pairs.push_back({x, y, apsp[x][y], 0, 0.0});
    }
  Rng pair_rng(derive_seed(seed, 0, 0xDEC0));
  for (std::size_t p = 0; p < opts.random_pairs; ++p) {
    const auto x = static_cast<Vertex>(pair_rng.index(n));
    const auto y = static_cast<Vertex>(pair_rng.index(n));
    stats.pairs.push_back({x, y, apsp[x][y], 0, 0.0});
  }

  std::vector<PathWitness> witnesses;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      witnesses.push_back(shortest_path_witness(g, g.terminal(i), g.terminal(j)));
      PathConcentration pc;
      pc.from = i;
      pc.to = j;
      pc.length = witnesses.back().length;
      pc.vertex_count = witnesses.back().vertices.size();
      stats.paths.push_back(std::move(pc));
    }

  struct Tally {
    std::size_t clusters = 0;
    std::size_t diameter_violations = 0;
    double max_diameter = 0.0;
    std::size_t cover_violations = 0;
    std::vector<std::size_t> separated;
    std::vector<std::uint64_t> z_sum, z_sq;
    std::vector<std::vector<std::size_t>> exceed;  // exceed[path][t] = #{Z_P > t}
  };
  auto fresh = [&] {
    Tally t;
    t.separated.assign(stats.pairs.size(), 0);
    t.z_sum.assign(witnesses.size(), 0);
    t.z_sq.assign(witnesses.size(), 0);
    t.exceed.assign(witnesses.size(), std::vector<std::size_t>(opts.max_tail + 1, 0));
    return t;
  };

  const auto tallies = parallel_chunks(trials, [&](std::size_t begin, std::size_t end) {
    Tally t = fresh();
    std::vector<char> scratch(k, 0);
    for (std::size_t trial = begin; trial < end; ++trial) {
      Rng rng(derive_seed(seed, trial));
      const Carving c = carve(rows, delta, rng);
      const auto owner = owner_map(c.partition, n);
      for (const auto& cell : c.partition.cells) {
        if (cell.empty()) continue;
        ++t.clusters;
        double diam = 0.0;
        for (std::size_t a = 0; a < cell.size(); ++a)
          for (std::size_t b = a + 1; b < cell.size(); ++b) diam = std::max(diam, apsp[cell[a]][cell[b]]);
        t.max_diameter = std::max(t.max_diameter, diam);
        if (diam > 2.0 * delta) ++t.diameter_violations;
      }
      for (Vertex term : g.terminals())
        if (owner[term] == kUnassigned) ++t.cover_violations;
      for (std::size_t p = 0; p < stats.pairs.size(); ++p) {
        const auto ox = owner[stats.pairs[p].x], oy = owner[stats.pairs[p].y];
        // Separated iff some cluster holds exactly one of the two points.
        if (ox != oy) ++t.separated[p];
      }
      for (std::size_t w = 0; w < witnesses.size(); ++w) {
        const std::size_t z = degree_of_separation(owner, witnesses[w], scratch);
        t.z_sum[w] += z;
        t.z_sq[w] += static_cast<std::uint64_t>(z) * z;
        for (std::size_t tt = 0; tt <= opts.max_tail && tt < z; ++tt) ++t.exceed[w][tt];
      }
    }
    return t;
  });

  Tally total = fresh();
  for (const auto& t : tallies) {
    total.clusters += t.clusters;
    total.diameter_violations += t.diameter_violations;
    total.max_diameter = std::max(total.max_diameter, t.max_diameter);
    total.cover_violations += t.cover_violations;
    for (std::size_t p = 0; p < t.separated.size(); ++p) total.separated[p] += t.separated[p];
    for (std::size_t w = 0; w < witnesses.size(); ++w) {
      total.z_sum[w] += t.z_sum[w];
      total.z_sq[w] += t.z_sq[w];
      for (std::size_t tt = 0; tt <= opts.max_tail; ++tt) total.exceed[w][tt] += t.exceed[w][tt];
    }
  }

  const auto N = static_cast<double>(trials);
  stats.clusters_checked = total.clusters;
  stats.diameter_violations = total.diameter_violations;
  stats.max_cluster_diameter = total.max_diameter;
  stats.cover_violations = total.cover_violations;
  for (std::size_t p = 0; p < stats.pairs.size(); ++p) {
    stats.pairs[p].separated = total.separated[p];
    stats.pairs[p].frequency = static_cast<double>(total.separated[p]) / N;
  }
  stats.zp_histogram.assign(opts.max_tail + 1, 0.0);
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    auto& pc = stats.paths[w];
    pc.mean = static_cast<double>(total.z_sum[w]) / N;
    const double second = static_cast<double>(total.z_sq[w]) / N;
    pc.stddev = trials > 1 ? std::sqrt(std::max(0.0, (second - pc.mean * pc.mean) * N / (N - 1.0))) : 0.0;
    pc.tail.resize(opts.max_tail + 1);
    for (std::size_t tt = 0; tt <= opts.max_tail; ++tt) {
      pc.tail[tt] = static_cast<double>(total.exceed[w][tt]) / N;
      stats.zp_histogram[tt] += static_cast<double>(total.exceed[w][tt]);
    }
  }
  if (!witnesses.empty())
    for (auto& h : stats.zp_histogram) h /= N * static_cast<double>(witnesses.size());
  return stats;
}

/// Tail-decay test on Pr[Z_P > t] for t in [first, last]: the sequence must be
/// nonincreasing, and the least-squares slope of ln Pr[Z_P > t] against t must
/// be negative over the points above `floor`, plus the first point at or below
/// it, censored to `floor`. Fewer than two points pass vacuously.
inline bool tail_decays(const std::vector<double>& tail, std::size_t first, std::size_t last, double floor) {
  last = std::min(last, tail.empty() ? 0 : tail.size() - 1);
  for (std::size_t t = first; t < last; ++t)
    if (tail[t + 1] > tail[t]) return false;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t t = first; t <= last && t < tail.size(); ++t) {
    if (tail[t] > floor) {
      pts.emplace_back(static_cast<double>(t), std::log(tail[t]));
    } else {
      if (!pts.empty()) pts.emplace_back(static_cast<double>(t), std::log(floor));
      break;
    }
  }
  if (pts.size() < 2) return true;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx < 0.0;
}

struct RequirementCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Pass/fail per decomposition requirement at three standard errors.
inline std::vector<RequirementCheck> check_requirements(const DecompositionStats& s, std::size_t max_tail = 8) {
  const auto N = static_cast<double>(s.trials);
  std::vector<RequirementCheck> out;

  out.push_back({"diameter_bound", s.diameter_violations == 0,
                 std::to_string(s.diameter_violations) + " of " + std::to_string(s.clusters_checked) +
                     " clusters exceed 2*delta; max diameter " + std::to_string(s.max_cluster_diameter)});
  out.push_back({"terminal_cover", s.cover_violations == 0,
                 std::to_string(s.cover_violations) + " uncovered terminal occurrences"});

  std::size_t sep_fail = 0;
  for (const auto& p : s.pairs) {
    const double sigma = std::sqrt(p.frequency * (1.0 - p.frequency) / N);
    if (p.frequency > s.beta * p.distance / s.delta + 3.0 * sigma) ++sep_fail;
  }
  out.push_back({"separation_probability", sep_fail == 0,
                 std::to_string(sep_fail) + " of " + std::to_string(s.pairs.size()) + " pairs above bound"});

  std::size_t mean_fail = 0;
  for (const auto& p : s.paths) {
    const double sigma = p.stddev / std::sqrt(N);
    if (p.mean > 1.0 + s.beta * p.length / s.delta + 3.0 * sigma) ++mean_fail;
  }
  out.push_back({"mean_degree_of_separation", mean_fail == 0,
                 std::to_string(mean_fail) + " of " + std::to_string(s.paths.size()) + " paths above bound"});

  std::size_t tail_fail = 0;
  for (const auto& p : s.paths)
    if (!tail_decays(p.tail, 1, max_tail, 10.0 / N)) ++tail_fail;
  out.push_back({"tail_decay", tail_fail == 0,
                 std::to_string(tail_fail) + " of " + std::to_string(s.paths.size()) + " paths without decay"});
  return out;
}

}  // namespace sprkit
