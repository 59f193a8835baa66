#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sprkit/ball_growing.hpp"
#include "sprkit/evaluate.hpp"
#include "sprkit/generate.hpp"

namespace sprkit {
namespace {

TEST(GrowthBase, Values) {
  EXPECT_DOUBLE_EQ(growth_base(2), 1.0 + 1.0 / 35.0);
  EXPECT_DOUBLE_EQ(growth_base(16), 1.0 + 1.0 / 140.0);
  EXPECT_EQ(growth_base(1), 2.0);
}

TEST(RunPartition, SingleTerminalAbsorbsEverything) {
  GeneratorParams p;
  p.n = 25;
  p.k = 1;
  p.min_weight = 0.5;
  p.max_weight = 3.0;
  const auto g = generate(Family::random_tree, p, 4);
  Rng rng(1);
  const auto res = run_partition(g, rng);
  ASSERT_EQ(res.partition.cells.size(), 1u);
  EXPECT_EQ(res.partition.cells[0].size(), 25u);
  EXPECT_GE(res.outer_iterations, 1u);
}

TEST(RunPartition, StarCenterJoinsExactlyOneLeaf) {
  const WeightedGraph g(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, {1, 2, 3});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto res = run_partition(g, rng, {.check_invariants = true});
    EXPECT_TRUE(validate_partition(g, res.partition, true).ok());
    int holders = 0;
    for (const auto& c : res.partition.cells) holders += c.size() == 2;
    EXPECT_EQ(holders, 1);
  }
}

TEST(RunPartition, ScriptedPathReplay) {
  // t1 - x - y - t2, unit weights. R_1^1 = 1.5 takes x; R_2^1 = 10 takes y
  // but cannot pass x, which already belongs to t1.
  const WeightedGraph g(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}}, {0, 3});
  const double mean = growth_base(2);
  oracle::ScriptedUniform u{{oracle::uniform_for_exponential(1.5, mean), oracle::uniform_for_exponential(10.0, mean)}};
  const auto res = run_partition(g, u, {.record_trace = true, .check_invariants = true});
  EXPECT_EQ(res.outer_iterations, 1u);
  ASSERT_EQ(res.trace.size(), 2u);
  EXPECT_NEAR(res.trace[0].increment, 1.5, 1e-12);
  EXPECT_EQ(res.trace[0].added, std::vector<Vertex>{1});
  EXPECT_EQ(res.trace[1].added, std::vector<Vertex>{2});
  EXPECT_EQ(res.partition.cells, (std::vector<std::vector<Vertex>>{{0, 1}, {2, 3}}));
}

TEST(RunPartition, RadiiUseMeanBToTheI) {
  const WeightedGraph g(3, {{0, 1, 20.0}, {1, 2, 50.0}}, {0, 2});
  // Every draw is the median of its exponential: R = mean * ln 2.
  oracle::ScriptedUniform u{{0.5}};
  const auto res = run_partition(g, u, {.b_override = 2.0, .record_trace = true});
  ASSERT_EQ(res.trace.size(), 8u);  // vertex 1 falls at i = 4
  for (const auto& step : res.trace)
    EXPECT_NEAR(step.increment, std::ldexp(1.0, static_cast<int>(step.iteration)) * std::log(2.0), 1e-9);
}

TEST(RunPartition, RateInterpretationShrinksIncrements) {
  // Increments sum to ln 2 at most, so keep the Steiner point closer than that.
  const WeightedGraph g(3, {{0, 1, 0.3}, {1, 2, 0.3}}, {0, 2});
  oracle::ScriptedUniform u{{0.5}};
  const auto res = run_partition(g, u, {.b_override = 2.0, .rate_interpretation = true, .record_trace = true});
  EXPECT_EQ(res.outer_iterations, 1u);
  for (const auto& step : res.trace)
    EXPECT_NEAR(step.increment, std::ldexp(1.0, -static_cast<int>(step.iteration)) * std::log(2.0), 1e-12);
}

TEST(RunPartition, IterationCapCarriesPartialState) {
  const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}}, {0, 2});
  oracle::ScriptedUniform u{{0.0}};  // radii never grow
  try {
    run_partition(g, u, {.iteration_cap = 5});
    FAIL() << "expected IterationCapExceeded";
  } catch (const IterationCapExceeded& e) {
    EXPECT_EQ(e.partial().outer_iterations, 5u);
    EXPECT_EQ(e.partial().partition.assigned_count(), 2u);
  }
}

TEST(RunPartition, DeterministicPerSeed) {
  GeneratorParams p;
  p.n = 60;
  p.k = 6;
  p.p = 0.08;
  p.min_weight = 1.0;
  p.max_weight = 4.0;
  p.placement = Placement::uniform;
  const auto g = rescale_to_unit_min(generate(Family::gnp_weighted, p, 8)).graph;
  Rng a(5), b(5);
  const auto ra = run_partition(g, a, {.record_trace = true});
  const auto rb = run_partition(g, b, {.record_trace = true});
  EXPECT_EQ(ra.partition, rb.partition);
  ASSERT_EQ(ra.trace.size(), rb.trace.size());
  for (std::size_t i = 0; i < ra.trace.size(); ++i) {
    EXPECT_EQ(ra.trace[i].increment, rb.trace[i].increment);
    EXPECT_EQ(ra.trace[i].added, rb.trace[i].added);
  }
}

// Replays a trace: every vertex added at (i, j) lies within r_j of t_j in the
// subgraph induced by the then-unassigned vertices plus V_j; cells only grow.
TEST(RunPartition, TraceReplaysRestrictedBalls) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratorParams p;
    p.n = 10;
    p.k = 2 + seed % 3;
    p.p = 0.35;
    p.min_weight = 0.5;
    p.max_weight = 3.0;
    p.placement = Placement::uniform;
    const auto g = rescale_to_unit_min(generate(Family::gnp_weighted, p, seed)).graph;
    Rng rng(seed);
    const auto res = run_partition(g, rng, {.record_trace = true, .check_invariants = true});
    std::vector<std::int32_t> owner(g.num_vertices(), kUnassigned);
    for (std::size_t j = 0; j < g.num_terminals(); ++j) owner[g.terminal(j)] = static_cast<std::int32_t>(j);
    std::vector<double> last_radius(g.num_terminals(), 0.0);
    for (const auto& step : res.trace) {
      const auto cell = static_cast<std::int32_t>(step.terminal);
      EXPECT_GE(step.radius, last_radius[step.terminal]);
      last_radius[step.terminal] = step.radius;
      const auto allowed = [&](Vertex v) { return owner[v] == kUnassigned || owner[v] == cell; };
      const auto d = oracle::all_paths_distances(g, g.terminal(step.terminal), allowed);
      for (Vertex v : step.added) {
        EXPECT_EQ(owner[v], kUnassigned);
        EXPECT_LE(d[v], step.radius + 1e-12);
      }
      // Nothing else within the radius was left unassigned.
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (owner[v] == kUnassigned && d[v] <= step.radius - 1e-12) {
          EXPECT_NE(std::find(step.added.begin(), step.added.end(), v), step.added.end());
        }
      }
      for (Vertex v : step.added) owner[v] = cell;
    }
    EXPECT_EQ(partition_from_owner(owner, g.num_terminals()), res.partition);
  }
}

TEST(AssumptionHolds, Examples) {
  GeneratorParams p;
  p.n = 9;
  p.k = 3;
  const auto cycle = generate(Family::cycle, p, 0);
  EXPECT_TRUE(assumption_holds(cycle, 1.0));
  // Two terminals: aspect ratio 1 always, so 2^(k^3) = 256 admits it.
  const WeightedGraph two(2, {{0, 1, 3.0}}, {0, 1});
  EXPECT_TRUE(assumption_holds(two, 256.0));
  const WeightedGraph wide(3, {{0, 1, 1.0}, {1, 2, 0x1.0p50 - 1.0}}, {0, 1, 2});
  EXPECT_FALSE(assumption_holds(wide, 0x1.0p40));
  EXPECT_TRUE(assumption_holds(wide, 0x1.0p50));
}

TEST(Rescale, Identity) {
  GeneratorParams p;
  p.n = 9;
  p.k = 9;
  const auto g = generate(Family::cycle, p, 0);
  const auto r = rescale_to_unit_min(g);
  EXPECT_EQ(r.scale, 1.0);
  EXPECT_EQ(terminal_metric(r.graph), terminal_metric(g));
}

TEST(Rescale, DividesByMinimumTerminalDistance) {
  GeneratorParams p;
  p.rows = 4;
  p.cols = 5;
  p.k = 4;
  p.min_weight = p.max_weight = 5.0;
  const auto g = generate(Family::grid, p, 0);
  const auto r = rescale_to_unit_min(g);
  EXPECT_EQ(terminal_metric(r.graph).min_off_diagonal(), 1.0);
  const auto a = terminal_metric(g), b = terminal_metric(r.graph);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(b(i, j) * r.scale, a(i, j), 1e-12 * a(i, j));
}

TEST(Rescale, DistortionIsScaleInvariant) {
  GeneratorParams p;
  p.n = 40;
  p.k = 5;
  p.p = 0.12;
  p.min_weight = 2.0;
  p.max_weight = 9.0;
  p.placement = Placement::uniform;
  const auto g = generate(Family::gnp_weighted, p, 21);
  const auto r = rescale_to_unit_min(g);
  Rng rng(3);
  const auto part = run_partition(r.graph, rng).partition;
  const auto on_original = distortion(g, contract(g, part));
  const auto on_rescaled = distortion(r.graph, contract(r.graph, part));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(on_original.stretch(i, j), on_rescaled.stretch(i, j), 1e-12);
}

}  // namespace
}  // namespace sprkit
