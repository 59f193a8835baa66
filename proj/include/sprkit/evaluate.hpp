#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sprkit/ball_growing.hpp"
#include "sprkit/general.hpp"
#include "sprkit/graph.hpp"
#include "sprkit/minor.hpp"
#include "sprkit/parallel.hpp"
#include "sprkit/random.hpp"

namespace sprkit {

// Slack for floating summation order when comparing minor and graph distances.
inline constexpr double kStretchSlack = 1e-9;

struct Distortion {
  DistanceMatrix stretch;  // diagonal set to 1
  double max_stretch = 1.0;
};

/// Entrywise d_minor / d_G over distinct terminal pairs. Unreachable minor
/// pairs give an infinite stretch.
inline Distortion distortion(const DistanceMatrix& graph_metric, const TerminalMinor& m) {
  const std::size_t k = m.size();
  if (graph_metric.size() != k) throw std::invalid_argument("metric and minor disagree on the terminal count");
  const auto md = minor_distances(m);
  Distortion out{DistanceMatrix(k, 1.0), 1.0};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      if (!(graph_metric(i, j) > 0.0)) throw InvariantViolation("zero distance between distinct terminals");
      out.stretch(i, j) = md(i, j) / graph_metric(i, j);
      out.max_stretch = std::max(out.max_stretch, out.stretch(i, j));
    }
  if (k < 2) out.max_stretch = 1.0;
  return out;
}

inline Distortion distortion(const WeightedGraph& g, const TerminalMinor& m) { return distortion(terminal_metric(g), m); }

enum class Algorithm { alg1, general, baseline };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::alg1: return "alg1";
    case Algorithm::general: return "general";
    case Algorithm::baseline: return "baseline";
  }
  return "unknown";
}

inline std::optional<Algorithm> parse_algorithm(const std::string& s) {
  for (Algorithm a : {Algorithm::alg1, Algorithm::general, Algorithm::baseline})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

struct TrialReport {
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::alg1;
  std::vector<std::vector<double>> stretch;
  double max_stretch = 1.0;
  std::size_t outer_iterations = 0;
  double wall_time = 0.0;  // seconds
  bool valid_partition = false;
  bool dominated = false;  // every stretch >= 1 - kStretchSlack
  std::size_t recursion_depth = 0;
  std::string error;       // empty unless the trial failed

  bool ok() const { return error.empty(); }
  friend bool operator==(const TrialReport&, const TrialReport&) = default;
};

struct RunOptions {
  BallGrowingOptions inner;
  double threshold = kDefaultThreshold;
};

struct TrialOutcome {
  TrialReport report;
  PartialPartition partition;
  TerminalMinor minor;
  std::vector<RecursionLevel> levels;
};

namespace detail {

inline PartialPartition partition_for(const WeightedGraph& g, Algorithm alg, std::uint64_t seed, const RunOptions& opts,
                                      TrialOutcome& out) {
  switch (alg) {
    case Algorithm::baseline: return nearest_terminal_partition(g);
    case Algorithm::alg1: {
      Rng rng(seed);
      if (g.num_terminals() < 2) {
        auto res = run_partition(g, rng, opts.inner);
        out.report.outer_iterations = res.outer_iterations;
        return std::move(res.partition);
      }
      // Ball growing runs in units where the closest terminals are 1 apart.
      auto res = run_partition(rescale_to_unit_min(g).graph, rng, opts.inner);
      out.report.outer_iterations = res.outer_iterations;
      return std::move(res.partition);
    }
    case Algorithm::general: {
      auto res = spr_general(g, seed, GeneralOptions{opts.threshold, opts.inner});
      out.report.outer_iterations = res.outer_iterations;
      out.report.recursion_depth = res.recursion_depth();
      out.levels = std::move(res.levels);
      return std::move(res.partition);
    }
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace detail

/// One seeded run: partition, validate, contract, measure stretch. Failures
/// are captured in report.error rather than thrown.
inline TrialOutcome run_trial(const WeightedGraph& g, const DistanceMatrix& metric, Algorithm alg, std::uint64_t seed,
                              const RunOptions& opts = {}) {
  TrialOutcome out;
  out.report.seed = seed;
  out.report.algorithm = alg;
  const auto start = std::chrono::steady_clock::now();
  try {
    out.partition = detail::partition_for(g, alg, seed, opts, out);
    const auto check = validate_partition(g, out.partition, true);
    out.report.valid_partition = check.ok();
    if (!check.ok()) throw InvalidPartition(check);
    out.minor = contract(g, out.partition);
    const auto d = distortion(metric, out.minor);
    const std::size_t k = metric.size();
    out.report.stretch.assign(k, std::vector<double>(k, 1.0));
    out.report.dominated = true;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        out.report.stretch[i][j] = d.stretch(i, j);
        if (i != j && d.stretch(i, j) < 1.0 - kStretchSlack) out.report.dominated = false;
      }
    out.report.max_stretch = d.max_stretch;
  } catch (const std::exception& e) {
    out.report.error = e.what();
  }
  out.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline TrialOutcome run_trial(const WeightedGraph& g, Algorithm alg, std::uint64_t seed, const RunOptions& opts = {}) {
  return run_trial(g, terminal_metric(g), alg, seed, opts);
}

struct AmplifiedResult {
  std::vector<TrialReport> trials;
  std::size_t best_index = 0;
  double best_max_stretch = 0.0;

  friend bool operator==(const AmplifiedResult&, const AmplifiedResult&) = default;
};

inline std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) { return derive_seed(master, trial, 0); }

/// Independent trials with seeds trial_seed(seed, i), run concurrently; keeps
/// the trial with the smallest max stretch (earliest on ties). Failed trials
/// stay in the list but never win; if all fail, throws.
inline AmplifiedResult amplify(const WeightedGraph& g, Algorithm alg, std::size_t trials, std::uint64_t seed,
                               const RunOptions& opts = {}) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  const auto metric = terminal_metric(g);
  AmplifiedResult out;
  out.trials = parallel_map(trials, [&](std::size_t i) {
    return run_trial(g, metric, alg, trial_seed(seed, i), opts).report;
  });
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& t = out.trials[i];
    if (!t.ok()) continue;
    if (!best || t.max_stretch < out.trials[*best].max_stretch) best = i;
  }
  if (!best) throw std::runtime_error("all " + std::to_string(trials) + " trials failed: " + out.trials.front().error);
  out.best_index = *best;
  out.best_max_stretch = out.trials[*best].max_stretch;
  return out;
}

struct BaselineComparison {
  TrialReport baseline;
  AmplifiedResult algorithm;
  // algorithm best / baseline; below 1 means the randomized minor did better.
  double ratio = 1.0;
};

inline BaselineComparison compare_baseline(const WeightedGraph& g, std::size_t trials, std::uint64_t seed,
                                           Algorithm alg = Algorithm::general, const RunOptions& opts = {}) {
  BaselineComparison out;
  out.baseline = run_trial(g, Algorithm::baseline, seed, opts).report;
  out.algorithm = amplify(g, alg, trials, seed, opts);
  out.ratio = out.algorithm.best_max_stretch / out.baseline.max_stretch;
  return out;
}

}  // namespace sprkit
