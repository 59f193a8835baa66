#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sprkit/error.hpp"
#include "sprkit/graph.hpp"
#include "sprkit/minor.hpp"
#include "sprkit/random.hpp"

namespace sprkit {

// b = 1 + 1/(35 log2 k). With one terminal b plays no role; 2 is used so the
// iteration cap stays finite.
inline double growth_base(std::size_t k) {
  if (k < 2) return 2.0;
  return 1.0 + 1.0 / (35.0 * std::log2(static_cast<double>(k)));
}

struct BallGrowingOptions {
  std::optional<double> b_override;
  // Read exp(b^i) as rate b^i (mean b^-i) instead of mean b^i.
  bool rate_interpretation = false;
  bool record_trace = false;
  // Validate the partial partition after every inner step.
  bool check_invariants = false;
  std::optional<std::size_t> iteration_cap;
};

struct GrowthStep {
  std::size_t iteration;  // outer loop, from 1
  std::size_t terminal;   // inner loop index j
  double increment;       // R_j^i
  double radius;          // r_j after the increment
  std::vector<Vertex> added;
};

struct BallGrowingResult {
  PartialPartition partition;
  std::size_t outer_iterations = 0;
  double b = 0.0;
  std::vector<double> radii;
  std::vector<GrowthStep> trace;
};

class IterationCapExceeded : public std::runtime_error {
 public:
  IterationCapExceeded(std::size_t cap, BallGrowingResult partial)
      : std::runtime_error("ball growing did not finish within " + std::to_string(cap) + " outer iterations (" +
                           std::to_string(partial.partition.assigned_count()) + " vertices assigned)"),
        partial_(std::move(partial)) {}
  const BallGrowingResult& partial() const { return partial_; }

 private:
  BallGrowingResult partial_;
};

/// 200 * ceil(log_b(n * D * k * s + 2)) where D is the aspect ratio and s
/// the minimum terminal distance (at least 1), so inputs that were not
/// rescaled to unit minimum still get room to grow.
inline std::size_t default_iteration_cap(const WeightedGraph& g, double b) {
  const auto n = static_cast<double>(g.num_vertices());
  const auto k = static_cast<double>(g.num_terminals());
  double aspect = 1.0, scale = 1.0;
  if (g.num_terminals() >= 2) {
    const auto metric = terminal_metric(g);
    aspect = aspect_ratio(metric);
    scale = std::max(1.0, metric.min_off_diagonal());
  } else {
    const auto d = shortest_distances(g, g.terminal(0));
    scale = std::max(1.0, *std::max_element(d.begin(), d.end()));
  }
  const double steps = std::ceil(std::log(n * aspect * k * scale + 2.0) / std::log(b));
  return static_cast<std::size_t>(200.0 * std::max(1.0, steps));
}

/// Iterative exponential-radius ball growing. Outer iteration i draws, for
/// each terminal j in order, R ~ Exp(mean b^i), adds it to r_j, and resets
/// V_j to the ball of radius r_j around t_j inside G[unassigned + V_j].
/// Terminates once every vertex is assigned; the result is a complete
/// partition with connected, terminal-anchored cells.
template <UniformSource U>
BallGrowingResult run_partition(const WeightedGraph& g, U& source, const BallGrowingOptions& opts = {}) {
  const std::size_t n = g.num_vertices();
  const std::size_t k = g.num_terminals();
  const double b = opts.b_override.value_or(growth_base(k));
  if (!(b > 1.0)) throw std::invalid_argument("growth base b must exceed 1");
  const std::size_t cap = opts.iteration_cap.value_or(default_iteration_cap(g, b));

  BallGrowingResult result;
  result.b = b;
  result.radii.assign(k, 0.0);
  std::vector<std::int32_t> owner(n, kUnassigned);
  std::vector<std::size_t> cell_size(k, 1);
  for (std::size_t j = 0; j < k; ++j) owner[g.terminal(j)] = static_cast<std::int32_t>(j);
  std::size_t assigned = k;

  auto snapshot = [&] { return partition_from_owner(owner, k); };

  double mean = 1.0;
  while (assigned < n) {
    if (result.outer_iterations == cap) {
      result.partition = snapshot();
      throw IterationCapExceeded(cap, std::move(result));
    }
    ++result.outer_iterations;
    mean = opts.rate_interpretation ? mean / b : mean * b;
    for (std::size_t j = 0; j < k; ++j) {
      const double increment = -mean * std::log1p(-source.uniform());
      result.radii[j] += increment;
      const auto cell = static_cast<std::int32_t>(j);
      const auto allowed = [&](Vertex v) { return owner[v] == kUnassigned || owner[v] == cell; };
      const auto grown = ball(g, g.terminal(j), result.radii[j], allowed);

      GrowthStep step{result.outer_iterations, j, increment, result.radii[j], {}};
      std::size_t added = 0;
      for (Vertex v : grown) {
        if (owner[v] == kUnassigned) {
          owner[v] = cell;
          ++added;
          if (opts.record_trace) step.added.push_back(v);
        }
      }
      assigned += added;
      const std::size_t new_size = cell_size[j] + added;
      if (opts.check_invariants) {
        // V_j union ball equals the ball only if the old cell sat inside it.
        if (new_size != grown.size())
          throw InvariantViolation("cell " + std::to_string(j) + " is not contained in its regrown ball at iteration " +
                                   std::to_string(result.outer_iterations));
        if (auto report = validate_partition(g, snapshot(), false); !report)
          throw InvariantViolation("after iteration " + std::to_string(result.outer_iterations) + ", terminal " +
                                   std::to_string(j) + ": " + report.message);
      }
      cell_size[j] = new_size;
      if (opts.record_trace) result.trace.push_back(std::move(step));
    }
  }
  result.partition = snapshot();
  return result;
}

/// Aspect ratio of the terminal metric at most `threshold`.
inline bool assumption_holds(const WeightedGraph& g, double threshold) { return aspect_ratio(g) <= threshold; }

struct RescaledGraph {
  WeightedGraph graph;
  double scale;  // original distance = rescaled distance * scale
};

/// Divides every weight by the minimum distance between distinct terminals.
inline RescaledGraph rescale_to_unit_min(const WeightedGraph& g) {
  if (g.num_terminals() < 2) throw std::invalid_argument("rescaling needs at least two terminals");
  const double scale = terminal_metric(g).min_off_diagonal();
  if (scale == 1.0) return {g, 1.0};
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.weight /= scale;
  return {WeightedGraph(g.num_vertices(), std::move(edges), {g.terminals().begin(), g.terminals().end()}), scale};
}

}  // namespace sprkit
