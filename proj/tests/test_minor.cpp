#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "sprkit/evaluate.hpp"
#include "sprkit/generate.hpp"
#include "sprkit/io.hpp"
#include "sprkit/minor.hpp"

namespace sprkit {
namespace {

WeightedGraph nine_cycle() {
  GeneratorParams p;
  p.n = 9;
  p.k = 3;
  return generate(Family::cycle, p, 0);
}

TEST(ValidatePartition, SingletonsArePartial) {
  const auto g = nine_cycle();
  const PartialPartition p{{{0}, {3}, {6}}};
  EXPECT_TRUE(validate_partition(g, p, false).ok());
  const auto full = validate_partition(g, p, true);
  EXPECT_EQ(full.violation, PartitionViolation::incomplete);
}

TEST(ValidatePartition, ReportsFirstViolation) {
  const auto g = nine_cycle();
  EXPECT_EQ(validate_partition(g, {{{0, 1}, {1, 3}, {6}}}, false).violation, PartitionViolation::overlap);
  EXPECT_EQ(validate_partition(g, {{{0, 4}, {3}, {6}}}, false).violation, PartitionViolation::disconnected);
  EXPECT_EQ(validate_partition(g, {{{1}, {3}, {6}}}, false).violation, PartitionViolation::missing_terminal);
  EXPECT_EQ(validate_partition(g, {{{0}, {3}}}, false).violation, PartitionViolation::cell_count);
  EXPECT_EQ(validate_partition(g, {{{0, 42}, {3}, {6}}}, false).violation, PartitionViolation::vertex_out_of_range);
}

TEST(Contract, NineCycleTriangle) {
  const auto g = nine_cycle();
  const PartialPartition p{{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}};
  const auto m = contract(g, p);
  ASSERT_EQ(m.edges.size(), 3u);
  for (const auto& e : m.edges) EXPECT_EQ(e.weight, oracle::all_paths_distances(g, g.terminal(e.a))[g.terminal(e.b)]);
  for (const auto& e : m.edges) EXPECT_EQ(e.weight, 3.0);
  EXPECT_EQ(m.edges[0].provenance, (std::vector<std::pair<Vertex, Vertex>>{{2, 3}}));
  EXPECT_EQ(m.edges[1].provenance, (std::vector<std::pair<Vertex, Vertex>>{{0, 8}}));
}

TEST(Contract, PathThroughSteinerPoint) {
  const WeightedGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}}, {0, 2});
  const auto m = contract(g, {{{0, 1}, {2}}});
  ASSERT_EQ(m.edges.size(), 1u);
  EXPECT_EQ(m.edges[0].weight, 2.0);
  const auto d = minor_distances(m);
  EXPECT_EQ(d(0, 1), 2.0);
}

TEST(Contract, NoCrossEdgesMeansNoMinorEdges) {
  // Two components, each holding one terminal.
  const WeightedGraph g(4, {{0, 1, 1.0}, {2, 3, 1.0}}, {0, 2});
  const auto m = contract(g, {{{0, 1}, {2, 3}}});
  EXPECT_TRUE(m.edges.empty());
  EXPECT_FALSE(is_reachable(minor_distances(m)(0, 1)));
}

TEST(Contract, RejectsInvalidPartition) {
  const auto g = nine_cycle();
  try {
    contract(g, {{{0, 1}, {3}, {6}}});
    FAIL() << "expected InvalidPartition";
  } catch (const InvalidPartition& e) {
    EXPECT_EQ(e.report().violation, PartitionViolation::incomplete);
  }
}

TEST(MinorDistances, TriangleUsesDirectEdges) {
  TerminalMinor m{{0, 3, 6}, {{0, 1, 3.0, {}}, {0, 2, 3.0, {}}, {1, 2, 3.0, {}}}};
  const auto d = minor_distances(m);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(d(i, j), i == j ? 0.0 : 3.0);
}

TEST(NearestTerminal, NineCycleCells) {
  const auto p = nearest_terminal_partition(nine_cycle());
  EXPECT_EQ(p.cells[0], (std::vector<Vertex>{0, 1, 8}));
  EXPECT_EQ(p.cells[1], (std::vector<Vertex>{2, 3, 4}));
  EXPECT_EQ(p.cells[2], (std::vector<Vertex>{5, 6, 7}));
}

TEST(NearestTerminal, StarCenterGoesToLowestIndex) {
  const WeightedGraph g(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, {3, 1, 2});
  const auto p = nearest_terminal_partition(g);
  EXPECT_EQ(p.cells[0], (std::vector<Vertex>{0, 3}));
  EXPECT_TRUE(validate_partition(g, p, true).ok());
}

TEST(NearestTerminal, SingleTerminalTakesAll) {
  GeneratorParams p;
  p.rows = 4;
  p.cols = 4;
  p.k = 1;
  const auto g = generate(Family::grid, p, 1);
  const auto part = nearest_terminal_partition(g);
  EXPECT_EQ(part.cells.size(), 1u);
  EXPECT_EQ(part.cells[0].size(), 16u);
}

// Minor distances by exhaustive simple-path search over the minor's edges.
double minor_oracle(const TerminalMinor& m, std::size_t s, std::size_t t) {
  std::vector<Edge> edges;
  for (const auto& e : m.edges) edges.push_back({static_cast<Vertex>(e.a), static_cast<Vertex>(e.b), e.weight});
  std::vector<Vertex> terms(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) terms[i] = static_cast<Vertex>(i);
  const WeightedGraph h(m.size(), edges, terms);
  return oracle::all_paths_distances(h, static_cast<Vertex>(s))[t];
}

// Properties over random instances: the baseline contracts to a valid minor,
// each minor edge carries the recomputed graph distance, minor distances
// dominate graph distances, and the baseline stretch stays within k.
TEST(MinorProperties, BaselineOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    GeneratorParams p;
    p.n = 5 + seed % 8;
    p.k = 2 + seed % 4;
    p.p = 0.4;
    p.min_weight = 0.2;
    p.max_weight = 5.0;
    p.placement = Placement::uniform;
    const auto g = generate(seed % 2 ? Family::gnp_weighted : Family::random_tree, p, seed);
    const auto part = nearest_terminal_partition(g);
    ASSERT_TRUE(validate_partition(g, part, true).ok()) << "seed " << seed;
    const auto m = contract(g, part);
    const auto metric = terminal_metric(g);
    for (const auto& e : m.edges)
      EXPECT_EQ(e.weight, oracle::all_paths_distances(g, g.terminal(e.a))[g.terminal(e.b)]);
    const auto md = minor_distances(m);
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (i == j) continue;
        EXPECT_GE(md(i, j), metric(i, j) * (1.0 - kStretchSlack));
        EXPECT_NEAR(md(i, j), minor_oracle(m, i, j), 1e-9 * md(i, j));
        EXPECT_LE(md(i, j) / metric(i, j), static_cast<double>(m.size()) + kStretchSlack) << "seed " << seed;
      }
  }
}

TEST(MinorIo, EdgeListUsesTerminalsAsVertices) {
  const auto g = nine_cycle();
  const auto m = contract(g, nearest_terminal_partition(g));
  std::stringstream out;
  write_minor_edge_list(out, m);
  const auto h = read_edge_list(out);
  EXPECT_EQ(h.num_vertices(), 3u);
  EXPECT_EQ(h.num_terminals(), 3u);
  EXPECT_EQ(terminal_metric(h), terminal_metric(g));
}

TEST(PartitionIo, RoundTrip) {
  const auto g = nine_cycle();
  const auto part = nearest_terminal_partition(g);
  std::stringstream buf;
  write_partition(buf, part, g.num_vertices());
  EXPECT_EQ(read_partition(buf), part);
}

}  // namespace
}  // namespace sprkit
