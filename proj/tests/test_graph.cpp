/*
 * Copyright 2026 The planar-ising Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "planar_ising/embedding.hpp"
#include "planar_ising/graph.hpp"
#include "test_support.hpp"

namespace pi = planar_ising;
using pi::Edge;
using pi::Graph;

namespace {

Graph k5_minus_ae() {
  Graph g = pi::complete_graph(5);
  Graph h(5);
  for (const Edge& e : g.edges())
    if (!(e.u == 0 && e.v == 4)) h.add_edge(e.u, e.v);
  return h;
}

Graph k33() {
  Graph g(6);
  for (int a = 0; a < 3; ++a)
    for (int b = 3; b < 6; ++b) g.add_edge(a, b);
  return g;
}

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) g.add_edge(i, j);
  return g;
}

// Random planar graph grown through the planarity tester itself; used where
// only the embedder is under test.
Graph random_planar_graph(int n, int attempts, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> vertex(0, n - 1);
  Graph g(n);
  for (int t = 0; t < attempts; ++t) {
    int a = vertex(rng), b = vertex(rng);
    if (a == b || g.has_edge(a, b)) continue;
    Graph h = g.with_edge(a, b);
    if (pi::is_planar(h)) g = std::move(h);
  }
  return g;
}

double face_turning(const pi::PlanarEmbedding& emb, const std::vector<pi::Vertex>& walk) {
  double total = 0.0;
  const std::size_t k = walk.size();
  for (std::size_t s = 0; s < k; ++s)
    total += pi::turning_angle(emb, walk[s], walk[(s + 1) % k], walk[(s + 2) % k]);
  return total;
}

bool is_simple_cycle(const std::vector<pi::Vertex>& walk) {
  std::set<pi::Vertex> seen(walk.begin(), walk.end());
  return walk.size() >= 3 && seen.size() == walk.size();
}

}  // namespace

TEST(Graph, RejectsInvalidEdges) {
  Graph g(3);
  EXPECT_THROW(g.add_edge(0, 0), pi::Error);
  EXPECT_THROW(g.add_edge(0, 3), pi::Error);
  EXPECT_THROW(g.add_edge(-1, 2), pi::Error);
  g.add_edge(2, 1);
  EXPECT_THROW(g.add_edge(1, 2), pi::Error);
  EXPECT_EQ(g.edge(0), Edge(1, 2));
  EXPECT_EQ(*g.edge_id(2, 1), 0);
}

TEST(Graph, DirectedEdgeIndexIsBijectiveInvolution) {
  Graph g = pi::grid_graph(3, 4);
  pi::DirectedEdgeIndex index(g);
  ASSERT_EQ(index.size(), 2 * g.num_edges());
  std::set<std::pair<int, int>> seen;
  for (int d = 0; d < index.size(); ++d) {
    EXPECT_TRUE(seen.emplace(index.tail(d), index.head(d)).second);
    const int r = pi::DirectedEdgeIndex::reverse(d);
    EXPECT_EQ(pi::DirectedEdgeIndex::reverse(r), d);
    EXPECT_EQ(index.tail(r), index.head(d));
    EXPECT_EQ(index.directed(g, index.tail(d), index.head(d)), d);
  }
}

TEST(Planarity, SmallExamples) {
  EXPECT_TRUE(pi::is_planar(pi::complete_graph(4)));
  EXPECT_FALSE(pi::is_planar(pi::complete_graph(5)));
  EXPECT_TRUE(pi::is_planar(k5_minus_ae()));
  EXPECT_FALSE(pi::is_planar(k33()));
  EXPECT_TRUE(pi::is_planar(pi::grid_graph(7, 7)));
  EXPECT_TRUE(pi::is_planar(Graph(1)));
}

TEST(Planarity, AgreesWithRotationSystemOracle) {
  std::mt19937_64 rng(11);
  int nonplanar = 0;
  int checked = 0;
  for (int trial = 0; checked < 150; ++trial) {
    const int n = 5 + trial % 3;
    Graph g = random_graph(n, 0.55, rng);
    if (trial % 3 == 0) {
      // sparse graphs rarely contain a Kuratowski subgraph; plant one
      Graph base = trial % 2 ? k33() : pi::complete_graph(5);
      Graph h(7);
      for (const Edge& e : base.edges()) h.add_edge(e.u, e.v);
      std::uniform_int_distribution<int> vertex(0, 6);
      for (int extra = 0; extra < 2; ++extra) {
        int a = vertex(rng), b = vertex(rng);
        if (a != b && !h.has_edge(a, b)) h.add_edge(a, b);
      }
      g = h;
    }
    if (pi::testing::rotation_system_count(g) > 2e4) continue;
    ++checked;
    const bool expected = pi::testing::brute_force_planar(g);
    nonplanar += !expected;
    EXPECT_EQ(pi::is_planar(g), expected) << "trial " << trial;
  }
  EXPECT_GT(nonplanar, 5);
}

TEST(Planarity, EulerBound) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Graph g = random_graph(8 + trial % 10, 0.7, rng);
    if (g.num_edges() > 3 * g.num_vertices() - 6) EXPECT_FALSE(pi::is_planar(g));
  }
}

TEST(PlanarCandidates, Examples) {
  EXPECT_EQ(pi::planar_candidates(Graph(4)).size(), 6u);
  EXPECT_TRUE(pi::planar_candidates(k5_minus_ae()).empty());

  // octahedron: maximal planar with 3n - 6 = 12 edges
  Graph oct(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (j != i + 3) oct.add_edge(i, j);
  ASSERT_EQ(oct.num_edges(), 12);
  EXPECT_TRUE(pi::planar_candidates(oct).empty());

  EXPECT_THROW(pi::planar_candidates(pi::complete_graph(5)), pi::Error);
}

TEST(PlanarCandidates, ExactlyThePlanarityPreservingNonEdges) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial % 3;
    Graph g = random_planar_graph(n, 2 * n, rng);
    if (pi::testing::rotation_system_count(g) > 2e3) continue;
    const auto cand = pi::planar_candidates(g);
    std::set<Edge> in(cand.begin(), cand.end());
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (g.has_edge(i, j)) {
          EXPECT_FALSE(in.count(Edge(i, j)));
          continue;
        }
        EXPECT_EQ(in.count(Edge(i, j)) == 1, pi::testing::brute_force_planar(g.with_edge(i, j)));
      }
    }
  }
}

TEST(Embedding, SmallGraphs) {
  Graph edge(2);
  edge.add_edge(0, 1);
  auto e1 = pi::straight_line_embed(edge);
  EXPECT_NE(e1.coord(0), e1.coord(1));

  Graph tri(3);
  tri.add_edge(0, 1);
  tri.add_edge(1, 2);
  tri.add_edge(0, 2);
  auto e2 = pi::straight_line_embed(tri);
  EXPECT_NE(pi::testing::orient(e2.coord(0), e2.coord(1), e2.coord(2)), 0.0);

  EXPECT_THROW(pi::straight_line_embed(pi::complete_graph(5)), pi::Error);
}

TEST(Embedding, GridHasNoCrossings) {
  Graph g = pi::grid_graph(7, 7);
  auto emb = pi::straight_line_embed(g);
  EXPECT_EQ(pi::testing::count_crossings(g, emb.coords()), 0);
}

TEST(Embedding, DisconnectedAndIsolatedVertices) {
  Graph g(12);
  g.add_edge(0, 1);  // single-edge component
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 2);
  g.add_edge(5, 6);
  g.add_edge(6, 7);  // path
  // 8..11 isolated
  auto emb = pi::straight_line_embed(g);
  EXPECT_EQ(pi::testing::count_crossings(g, emb.coords()), 0);
}

TEST(Embedding, RandomPlanarGraphsPassCrossingCheck) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial;
    Graph g = random_planar_graph(n, 4 * n, rng);
    auto emb = pi::straight_line_embed(g);
    EXPECT_EQ(pi::testing::count_crossings(g, emb.coords()), 0) << "n = " << n;
  }
}

TEST(Embedding, RotationMatchesAngularOrder) {
  std::mt19937_64 rng(23);
  Graph g = random_planar_graph(20, 80, rng);
  auto emb = pi::straight_line_embed(g);
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& rot = emb.rotation(v);
    for (std::size_t k = 1; k < rot.size(); ++k)
      EXPECT_LT(emb.direction_angle(v, rot[k - 1]), emb.direction_angle(v, rot[k]));
  }
}

TEST(TurningAngle, AxisAlignedCases) {
  // Cross-shaped star: centre 0 at the origin.
  Graph g(5);
  for (int v = 1; v < 5; ++v) g.add_edge(0, v);
  pi::PlanarEmbedding emb(g, {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  constexpr double half = std::numbers::pi / 2;
  // (1,0) -> (0,0) heading (-1,0)
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 1, 0, 2), -half);
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 1, 0, 4), half);
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 1, 0, 3), 0.0);
  // (0,1) -> (0,0) heading (0,-1)
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 2, 0, 1), half);
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 2, 0, 3), -half);
  // (-1,0) -> (0,0) heading (1,0)
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 3, 0, 2), half);
  // (0,-1) -> (0,0) heading (0,1)
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 4, 0, 3), half);
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 4, 0, 1), -half);
  // reversal
  EXPECT_DOUBLE_EQ(pi::turning_angle(emb, 1, 0, 1), std::numbers::pi);
  EXPECT_THROW(pi::turning_angle(emb, 1, 2, 0), pi::Error);
}

TEST(TurningAngle, FacesTurnByTwoPi) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + 2 * trial;
    Graph g = random_planar_graph(n, 3 * n, rng);
    auto emb = pi::straight_line_embed(g);
    int checked = 0;
    for (const auto& walk : pi::face_walks(emb)) {
      if (!is_simple_cycle(walk)) continue;
      ++checked;
      EXPECT_NEAR(std::abs(face_turning(emb, walk)), 2 * std::numbers::pi, 1e-9);
    }
    EXPECT_GT(checked, 0);
  }
}

TEST(TurningAngle, FaceCountMatchesEuler) {
  std::mt19937_64 rng(31);
  auto geo = pi::testing::random_connected_planar(15, 30, rng);
  pi::PlanarEmbedding emb(geo.graph, geo.coords);
  const int faces = static_cast<int>(pi::face_walks(emb).size());
  EXPECT_EQ(geo.graph.num_vertices() - geo.graph.num_edges() + faces, 2);
}
