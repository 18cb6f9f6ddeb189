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
#include <complex>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "planar_ising/kacward.hpp"
#include "planar_ising/oracle.hpp"
#include "test_support.hpp"

namespace pi = planar_ising;
using pi::Graph;
using pi::IsingModel;

namespace {

Graph triangle() {
  Graph g(3);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(0, 2);
  return g;
}

// Closed forms from summing the 8 states of the triangle with all couplings t.
double triangle_log_z(double t) { return std::log(2 * std::exp(3 * t) + 6 * std::exp(-t)); }
double triangle_moment(double t) {
  return (2 * std::exp(3 * t) - 2 * std::exp(-t)) / (2 * std::exp(3 * t) + 6 * std::exp(-t));
}

int count_nonzeros(const Eigen::MatrixXcd& a) {
  int k = 0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) k += a(r, c) != std::complex<double>(0, 0);
  return k;
}

IsingModel random_model(const Graph& g, double lo, double hi, std::mt19937_64& rng) {
  return IsingModel(g, pi::testing::uniform_vector(g.num_edges(), lo, hi, rng));
}

IsingModel with_theta(const IsingModel& m, int edge, double value) {
  auto theta = m.theta_edges();
  theta[edge] = value;
  return IsingModel(m.graph(), theta);
}

}  // namespace

TEST(BuildSystem, SingleEdgeHasNoAdjacency) {
  Graph g(2);
  g.add_edge(0, 1);
  IsingModel m(g, {0.8});
  auto sys = pi::build_system(m, pi::straight_line_embed(g));
  EXPECT_EQ(sys.phase.rows(), 2);
  EXPECT_EQ(count_nonzeros(sys.phase), 0);
  EXPECT_DOUBLE_EQ(sys.weight(0), std::tanh(0.8));
  EXPECT_DOUBLE_EQ(sys.weight(1), std::tanh(0.8));
}

TEST(BuildSystem, TriangleAndPathNonzeroCounts) {
  Graph tri = triangle();
  auto sys = pi::build_system(IsingModel::zeros(tri), pi::straight_line_embed(tri));
  EXPECT_EQ(count_nonzeros(sys.phase), 6);

  Graph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  auto p = pi::build_system(IsingModel::zeros(path), pi::straight_line_embed(path));
  EXPECT_EQ(count_nonzeros(p.phase), 2);
  const int a01 = p.index.directed(path, 0, 1), a12 = p.index.directed(path, 1, 2);
  const int a21 = p.index.directed(path, 2, 1), a10 = p.index.directed(path, 1, 0);
  EXPECT_NE(p.phase(a01, a12), std::complex<double>(0, 0));
  EXPECT_NE(p.phase(a21, a10), std::complex<double>(0, 0));
}

TEST(BuildSystem, StructureOfPhaseMatrix) {
  Graph g = pi::grid_graph(4, 4);
  auto sys = pi::build_system(IsingModel::zeros(g), pi::straight_line_embed(g));
  for (int a = 0; a < sys.index.size(); ++a) {
    for (int b = 0; b < sys.index.size(); ++b) {
      const auto v = sys.phase(a, b);
      const bool allowed =
          sys.index.head(a) == sys.index.tail(b) && sys.index.tail(a) != sys.index.head(b);
      if (allowed)
        EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
      else
        EXPECT_EQ(v, std::complex<double>(0, 0));
    }
  }
}

TEST(BuildSystem, RejectsNonZeroField) {
  Graph g = triangle();
  IsingModel m(g, {0.1, 0.2, 0.3}, {0.0, 0.5, 0.0});
  EXPECT_THROW(pi::build_system(m, pi::straight_line_embed(g)), pi::Error);
}

TEST(BuildSystem, CapOnCouplings) {
  Graph g(2);
  g.add_edge(0, 1);
  EXPECT_THROW(IsingModel(g, {30.5}), pi::Error);
  EXPECT_NO_THROW(IsingModel(g, {-30.0}));
}

TEST(LogPartition, Examples) {
  std::mt19937_64 rng(1);
  auto geo = pi::testing::random_connected_planar(9, 16, rng);
  EXPECT_NEAR(pi::log_partition(IsingModel::zeros(geo.graph), pi::straight_line_embed(geo.graph)),
              9 * std::numbers::ln2, 1e-13);

  Graph e(2);
  e.add_edge(0, 1);
  EXPECT_NEAR(pi::log_partition(IsingModel(e, {1.0}), pi::straight_line_embed(e)),
              std::log(4 * std::cosh(1.0)), 1e-14);

  Graph tri = triangle();
  EXPECT_NEAR(pi::log_partition(IsingModel(tri, {0.5, 0.5, 0.5}), pi::straight_line_embed(tri)),
              triangle_log_z(0.5), 1e-13);
  EXPECT_NEAR(std::exp(triangle_log_z(0.5)), 12.6025622, 1e-6);
}

TEST(Moments, Examples) {
  Graph e(2);
  e.add_edge(0, 1);
  EXPECT_NEAR(pi::moments(IsingModel(e, {0.7}), pi::straight_line_embed(e))[0], std::tanh(0.7),
              1e-15);

  Graph g = pi::grid_graph(3, 3);
  for (double mu : pi::moments(IsingModel::zeros(g), pi::straight_line_embed(g)))
    EXPECT_EQ(mu, 0.0);

  Graph tri = triangle();
  for (double mu : pi::moments(IsingModel(tri, {0.5, 0.5, 0.5}), pi::straight_line_embed(tri)))
    EXPECT_NEAR(mu, triangle_moment(0.5), 1e-13);
  EXPECT_NEAR(triangle_moment(0.5), 0.61498, 1e-5);
}

TEST(Hessian, Examples) {
  Graph e(2);
  e.add_edge(0, 1);
  auto h1 = pi::hessian(IsingModel(e, {0.9}), pi::straight_line_embed(e));
  EXPECT_NEAR(h1(0, 0), 1 - std::tanh(0.9) * std::tanh(0.9), 1e-15);

  Graph tree(6);
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {1, 3}, {3, 4}, {3, 5}}) tree.add_edge(a, b);
  auto h2 = pi::hessian(IsingModel::zeros(tree), pi::straight_line_embed(tree));
  EXPECT_LT((h2 - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-14);

  Graph tri = triangle();
  IsingModel m(tri, {0.5, 0.5, 0.5});
  auto emb = pi::straight_line_embed(tri);
  auto h = pi::hessian(m, emb);
  constexpr double step = 1e-4;
  for (int f = 0; f < 3; ++f) {
    auto up = pi::moments(with_theta(m, f, 0.5 + step), emb);
    auto dn = pi::moments(with_theta(m, f, 0.5 - step), emb);
    for (int e2 = 0; e2 < 3; ++e2) EXPECT_NEAR(h(e2, f), (up[e2] - dn[e2]) / (2 * step), 1e-6);
  }
}

TEST(KacWard, MatchesEnumerationOnRandomPlanarGraphs) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 10;
    std::uniform_int_distribution<int> extra(0, 2 * n - 3);
    auto geo = pi::testing::random_connected_planar(n, n - 1 + extra(rng), rng);
    auto model = random_model(geo.graph, -1.0, 1.0, rng);
    auto emb = pi::straight_line_embed(geo.graph);
    auto eval = pi::evaluate(model, emb, pi::KacWardOutputs::moments);
    const double exact = pi::enum_log_partition(model);
    EXPECT_LE(std::abs(eval.log_partition - exact) / std::abs(exact), 1e-9);
    auto mu = pi::enum_moments(model);
    for (int e = 0; e < geo.graph.num_edges(); ++e) {
      const auto& ed = geo.graph.edge(e);
      EXPECT_NEAR(eval.moments[e], mu.mu_pairs(ed.u, ed.v), 1e-9);
    }
  }
}

TEST(KacWard, DisconnectedGraphsFactorize) {
  Graph g(9);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(3, 4);
  g.add_edge(5, 6);
  g.add_edge(6, 7);
  IsingModel m(g, {0.3, -0.8, 0.5, 1.1, -0.4, 0.9});
  auto emb = pi::straight_line_embed(g);
  EXPECT_NEAR(pi::log_partition(m, emb), pi::enum_log_partition(m), 1e-12);
  auto mu = pi::moments(m, emb);
  auto exact = pi::enum_moments(m);
  for (int e = 0; e < g.num_edges(); ++e)
    EXPECT_NEAR(mu[e], exact.mu_pairs(g.edge(e).u, g.edge(e).v), 1e-12);
}

TEST(KacWard, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto geo = pi::testing::random_connected_planar(8, 14, rng);
    auto model = random_model(geo.graph, -1.0, 1.0, rng);
    auto emb = pi::straight_line_embed(geo.graph);
    auto mu = pi::moments(model, emb);
    constexpr double h = 1e-4;
    for (int e = 0; e < geo.graph.num_edges(); ++e) {
      const double t = model.theta_edges()[e];
      const double fd = (pi::log_partition(with_theta(model, e, t + h), emb) -
                         pi::log_partition(with_theta(model, e, t - h), emb)) /
                        (2 * h);
      EXPECT_NEAR(fd, mu[e], 1e-6);
    }
  }
}

TEST(KacWard, HessianSymmetricPositiveDefiniteAndMatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    auto geo = pi::testing::random_connected_planar(7 + trial % 4, 15, rng);
    auto model = random_model(geo.graph, -1.5, 1.5, rng);
    auto emb = pi::straight_line_embed(geo.graph);
    auto h = pi::hessian(model, emb);
    EXPECT_LE((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(h);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
    constexpr double step = 1e-4;
    for (int f = 0; f < geo.graph.num_edges(); ++f) {
      const double t = model.theta_edges()[f];
      auto up = pi::moments(with_theta(model, f, t + step), emb);
      auto dn = pi::moments(with_theta(model, f, t - step), emb);
      for (int e = 0; e < geo.graph.num_edges(); ++e)
        EXPECT_NEAR(h(e, f), (up[e] - dn[e]) / (2 * step), 1e-5);
    }
  }
}

TEST(KacWard, CyclePhaseIsMinusOne) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    auto geo = pi::testing::random_connected_planar(6 + 3 * trial, 2 * (6 + 3 * trial), rng);
    auto emb = pi::straight_line_embed(geo.graph);
    auto sys = pi::build_system(IsingModel::zeros(geo.graph), emb);
    for (const auto& walk : pi::face_walks(emb)) {
      std::set<int> distinct(walk.begin(), walk.end());
      if (walk.size() < 3 || distinct.size() != walk.size()) continue;
      std::complex<double> prod(1.0, 0.0);
      const std::size_t k = walk.size();
      for (std::size_t s = 0; s < k; ++s) {
        const int a = sys.index.directed(geo.graph, walk[s], walk[(s + 1) % k]);
        const int b = sys.index.directed(geo.graph, walk[(s + 1) % k], walk[(s + 2) % k]);
        prod *= sys.phase(a, b);
      }
      EXPECT_NEAR(prod.real(), -1.0, 1e-10);
      EXPECT_NEAR(prod.imag(), 0.0, 1e-10);
    }
  }
}

TEST(KacWard, ZeroEdgesAreInert) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 6 + trial % 5;
    auto geo = pi::testing::random_connected_planar(n, n + 2, rng);
    auto model = random_model(geo.graph, -1.0, 1.0, rng);
    auto emb = pi::straight_line_embed(geo.graph);
    const double logz = pi::log_partition(model, emb);
    auto mu = pi::moments(model, emb);
    auto exact = pi::enum_moments(model);

    auto cand = pi::planar_candidates(geo.graph);
    ASSERT_FALSE(cand.empty());
    const auto pair = cand[cand.size() / 2];
    Graph bigger = geo.graph.with_edge(pair.u, pair.v);
    auto theta = model.theta_edges();
    theta.push_back(0.0);
    IsingModel ext(bigger, theta);
    auto emb2 = pi::straight_line_embed(bigger);
    EXPECT_NEAR(pi::log_partition(ext, emb2), logz, 1e-10);
    auto mu2 = pi::moments(ext, emb2);
    for (int e = 0; e < geo.graph.num_edges(); ++e) EXPECT_NEAR(mu2[e], mu[e], 1e-10);
    EXPECT_NEAR(mu2.back(), exact.mu_pairs(pair.u, pair.v), 1e-10);
  }
}

TEST(KacWard, IndependentOfEmbedding) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    auto geo = pi::testing::random_connected_planar(10, 20, rng);
    auto model = random_model(geo.graph, -1.0, 1.0, rng);
    pi::PlanarEmbedding drawn(geo.graph, geo.coords);
    auto mirrored_coords = geo.coords;
    for (auto& p : mirrored_coords) p.x = -p.x;
    pi::PlanarEmbedding mirrored(geo.graph, mirrored_coords);
    auto computed = pi::straight_line_embed(geo.graph);

    const auto a = pi::evaluate(model, drawn, pi::KacWardOutputs::moments);
    for (const auto* emb : {&mirrored, &computed}) {
      const auto b = pi::evaluate(model, *emb, pi::KacWardOutputs::moments);
      EXPECT_NEAR(a.log_partition, b.log_partition, 1e-9);
      for (std::size_t e = 0; e < a.moments.size(); ++e) EXPECT_NEAR(a.moments[e], b.moments[e], 1e-9);
    }
  }
}

TEST(KacWard, BrokenEmbeddingIsDetected) {
  // K4 drawn with a crossing: the square with both diagonals.
  Graph k4 = pi::complete_graph(4);
  pi::PlanarEmbedding bad(k4, {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  IsingModel m(k4, {0.4, 0.9, -0.3, 0.6, 0.2, 0.7});
  bool detected = false;
  try {
    const double z = pi::log_partition(m, bad);
    detected = std::abs(z - pi::enum_log_partition(m)) > 1e-6;
  } catch (const pi::Error& e) {
    detected = e.kind() == pi::ErrorKind::numerical;
  }
  EXPECT_TRUE(detected);
}

TEST(EdgeMarginal, Examples) {
  auto u = pi::edge_marginal(0, 0, 0);
  for (int a : {-1, 1})
    for (int b : {-1, 1}) EXPECT_DOUBLE_EQ(u(a, b), 0.25);

  auto c = pi::edge_marginal(0, 0, 1);
  EXPECT_DOUBLE_EQ(c(1, 1), 0.5);
  EXPECT_DOUBLE_EQ(c(-1, -1), 0.5);
  EXPECT_DOUBLE_EQ(c(1, -1), 0.0);
  EXPECT_DOUBLE_EQ(c(-1, 1), 0.0);

  auto p = pi::edge_marginal(1, 1, 1);
  EXPECT_DOUBLE_EQ(p(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(p(-1, -1) + p(1, -1) + p(-1, 1), 0.0);

  EXPECT_THROW(pi::edge_marginal(0.9, -0.9, 0.9), pi::Error);
  EXPECT_THROW(pi::edge_marginal(0, 0, 1.5), pi::Error);
}
