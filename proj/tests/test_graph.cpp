#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "sprkit/generate.hpp"
#include "sprkit/graph.hpp"
#include "sprkit/io.hpp"

namespace sprkit {
namespace {

WeightedGraph path_abc() { return WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 2.0}}, {0, 2}); }

WeightedGraph nine_cycle(std::vector<Vertex> terminals = {0, 3, 6}) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < 9; ++v) edges.push_back({v, static_cast<Vertex>((v + 1) % 9), 1.0});
  return WeightedGraph(9, std::move(edges), std::move(terminals));
}

WeightedGraph star3() { return WeightedGraph(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, {1, 2, 3}); }

TEST(ShortestDistances, PathSumsEdges) {
  const auto d = shortest_distances(path_abc(), 0);
  EXPECT_EQ(d, (std::vector<double>{0.0, 1.0, 3.0}));
}

TEST(ShortestDistances, ExcludedMiddleDisconnects) {
  const auto d = shortest_distances(path_abc(), 0, [](Vertex v) { return v != 1; });
  EXPECT_FALSE(is_reachable(d[2]));
  EXPECT_FALSE(is_reachable(d[1]));
  EXPECT_EQ(d[0], 0.0);
}

TEST(ShortestDistances, NineCycleMatchesAllPathsOracle) {
  const auto g = nine_cycle();
  const auto expected = oracle::all_paths_distances(g, 0);
  ASSERT_EQ(expected, (std::vector<double>{0, 1, 2, 3, 4, 4, 3, 2, 1}));
  for (Vertex s = 0; s < 9; ++s) EXPECT_EQ(shortest_distances(g, s), oracle::all_paths_distances(g, s));
}

TEST(ShortestDistances, SourceOutsideFilterIsInvalid) {
  EXPECT_THROW(shortest_distances(path_abc(), 1, [](Vertex v) { return v != 1; }), std::invalid_argument);
  EXPECT_THROW(shortest_distances(path_abc(), 7), std::invalid_argument);
}

TEST(Ball, ZeroRadiusIsCenter) { EXPECT_EQ(ball(nine_cycle(), 4, 0.0), std::vector<Vertex>{4}); }

TEST(Ball, UnitRadiusOnCycle) {
  const auto g = nine_cycle();
  EXPECT_EQ(ball(g, 0, 1.0), (std::vector<Vertex>{0, 1, 8}));
  EXPECT_EQ(ball(g, 0, 1.0), oracle::ball(g, 0, 1.0, [](Vertex) { return true; }));
}

TEST(Ball, HugeRadiusIsEverything) { EXPECT_EQ(ball(nine_cycle(), 2, 100.0).size(), 9u); }

TEST(Ball, NegativeRadiusRejected) { EXPECT_THROW(ball(nine_cycle(), 0, -1.0), std::invalid_argument); }

TEST(Ball, RestrictedBallStopsAtFilter) {
  const auto g = nine_cycle();
  const auto b = ball(g, 0, 3.0, [](Vertex v) { return v != 1; });
  EXPECT_EQ(b, (std::vector<Vertex>{0, 6, 7, 8}));
}

TEST(PathWitness, TrivialAndPath) {
  const auto same = shortest_path_witness(path_abc(), 1, 1);
  EXPECT_EQ(same.vertices, std::vector<Vertex>{1});
  EXPECT_EQ(same.length, 0.0);
  const auto p = shortest_path_witness(path_abc(), 0, 2);
  EXPECT_EQ(p.vertices, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(p.length, 3.0);
}

TEST(PathWitness, ShorterArcOnCycle) {
  // Arcs 0..4 (length 4) and 0,8,7,6,5,4 (length 5).
  const auto p = shortest_path_witness(nine_cycle(), 0, 4);
  EXPECT_EQ(p.vertices, (std::vector<Vertex>{0, 1, 2, 3, 4}));
  EXPECT_EQ(p.length, 4.0);
}

TEST(PathWitness, TiesPickSmallestPredecessor) {
  // Square 0-1-3, 0-2-3 all unit: both routes have length 2.
  const WeightedGraph g(4, {{0, 1, 1}, {0, 2, 1}, {1, 3, 1}, {2, 3, 1}}, {0});
  EXPECT_EQ(shortest_path_witness(g, 0, 3).vertices, (std::vector<Vertex>{0, 1, 3}));
  EXPECT_EQ(shortest_path_witness(g, 3, 0).vertices, (std::vector<Vertex>{3, 1, 0}));
}

TEST(TerminalMetric, Examples) {
  const WeightedGraph single(2, {{0, 1, 1.0}}, {0});
  EXPECT_EQ(terminal_metric(single), DistanceMatrix(1, 0.0));

  const auto m = terminal_metric(nine_cycle());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(m(i, j), i == j ? 0.0 : 3.0);

  const auto s = terminal_metric(star3());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(s(i, j), i == j ? 0.0 : 2.0);
}

TEST(AspectRatio, Examples) {
  EXPECT_EQ(aspect_ratio(nine_cycle()), 1.0);
  // Path 0 -1- 1 -9- 2 with terminals at both ends and the midpoint.
  const WeightedGraph p(3, {{0, 1, 1.0}, {1, 2, 9.0}}, {0, 1, 2});
  EXPECT_EQ(aspect_ratio(p), 10.0);
  EXPECT_EQ(aspect_ratio(path_abc()), 1.0);
  const WeightedGraph single(2, {{0, 1, 1.0}}, {0});
  EXPECT_THROW(aspect_ratio(single), std::invalid_argument);
}

TEST(WeightedGraph, RejectsMalformedInput) {
  EXPECT_THROW(WeightedGraph(2, {{0, 0, 1.0}}, {0}), GraphError);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, 0.0}}, {0}), GraphError);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, -1.0}}, {0}), GraphError);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, 1.0}, {1, 0, 2.0}}, {0}), GraphError);
  EXPECT_THROW(WeightedGraph(2, {{0, 2, 1.0}}, {0}), GraphError);
  EXPECT_THROW(WeightedGraph(2, {{0, 1, 1.0}}, {0, 0}), GraphError);
  EXPECT_THROW(WeightedGraph(3, {{0, 1, 1.0}}, {0}), GraphError);  // vertex 2 unreachable
  EXPECT_NO_THROW(WeightedGraph(3, {{0, 1, 1.0}}, {0, 2}));       // 2 is its own terminal
}

TEST(EdgeList, ParsesAndRejects) {
  std::istringstream ok("3 2 2\n0 1 1.5\n1 2 2\n0 2\n");
  const auto g = read_edge_list(ok);
  EXPECT_EQ(g.num_vertices(), 3u);
  EXPECT_EQ(g.num_edges(), 2u);
  EXPECT_EQ(g.terminal(1), 2u);

  auto bad = [](const char* text) {
    std::istringstream in(text);
    return read_edge_list(in);
  };
  EXPECT_THROW(bad(""), GraphError);
  EXPECT_THROW(bad("3 2 2\n0 1 1\n1 0 1\n0 2\n"), GraphError);  // duplicate
  EXPECT_THROW(bad("3 2 2\n0 0 1\n1 2 1\n0 2\n"), GraphError);  // self-loop
  EXPECT_THROW(bad("3 2 2\n0 1 0\n1 2 1\n0 2\n"), GraphError);  // zero weight
  EXPECT_THROW(bad("3 2 2\n0 1 1\n1 2 1\n"), GraphError);       // no terminal line
  EXPECT_THROW(bad("3 1 1\n0 1 1\n0\n"), GraphError);           // 2 unreachable
  EXPECT_THROW(bad("3 2 2\n0 1 1\n1 2 x\n0 2\n"), GraphError);  // bad weight
}

TEST(EdgeList, WriteReadPreservesDistances) {
  GeneratorParams p;
  p.n = 30;
  p.k = 5;
  p.p = 0.2;
  p.min_weight = 0.1;
  p.max_weight = 7.3;
  const auto g = generate(Family::gnp_weighted, p, 11);
  std::stringstream buf;
  write_edge_list(buf, g);
  const auto h = read_edge_list(buf);
  EXPECT_EQ(terminal_metric(g), terminal_metric(h));
}

// Property: Dijkstra, restricted or not, agrees with the exhaustive oracle on
// small random graphs, and distances satisfy the triangle inequality.
TEST(ShortestDistances, RandomSmallGraphsAgreeWithOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    GeneratorParams p;
    p.n = 4 + seed % 9;
    p.k = 2;
    p.p = 0.35;
    p.min_weight = 0.5;
    p.max_weight = 4.0;
    p.placement = Placement::uniform;
    const auto g = generate(Family::gnp_weighted, p, seed);
    Rng rng(seed);
    std::vector<char> mask(g.num_vertices());
    for (auto& m : mask) m = rng.uniform() < 0.75;
    const auto allowed = [&](Vertex v) { return mask[v] != 0; };
    const auto apsp = all_pairs_distances(g);
    for (Vertex s = 0; s < g.num_vertices(); ++s) {
      EXPECT_EQ(apsp[s], oracle::all_paths_distances(g, s)) << "seed " << seed;
      if (!mask[s]) continue;
      const auto restricted = shortest_distances(g, s, allowed);
      const auto expected = oracle::all_paths_distances(g, s, allowed);
      EXPECT_EQ(restricted, expected);
      const double r = rng.uniform(0.0, 6.0);
      EXPECT_EQ(ball(g, s, r, allowed), oracle::ball(g, s, r, allowed));
    }
    for (Vertex a = 0; a < g.num_vertices(); ++a)
      for (Vertex b = 0; b < g.num_vertices(); ++b)
        for (Vertex c = 0; c < g.num_vertices(); ++c) EXPECT_LE(apsp[a][c], apsp[a][b] + apsp[b][c] + 1e-12);
  }
}

TEST(Ball, InducedSubgraphOfBallIsConnected) {
  GeneratorParams p;
  p.rows = 6;
  p.cols = 7;
  p.k = 3;
  p.min_weight = 0.3;
  p.max_weight = 2.0;
  const auto g = generate(Family::grid, p, 5);
  const auto b = ball(g, 10, 2.5);
  const auto sub = induced_subgraph(g, b, std::vector<Vertex>{10});
  EXPECT_EQ(sub.graph.num_vertices(), b.size());  // construction would throw if disconnected
}

}  // namespace
}  // namespace sprkit
