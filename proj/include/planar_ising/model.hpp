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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "planar_ising/error.hpp"
#include "planar_ising/graph.hpp"

namespace planar_ising {

/// Largest admissible |theta| for couplings and fields. tanh rounds to +-1
/// in double precision near 19.
inline constexpr double kMaxCoupling = 30.0;

/// Ising model P(x) ~ exp(sum_i theta_i x_i + sum_{ij in E} theta_ij x_i x_j)
/// over spins x in {-1,+1}^n. Couplings are indexed by edge id.
class IsingModel {
 public:
  IsingModel() = default;

  IsingModel(Graph g, std::vector<double> theta_edges, std::vector<double> theta_nodes = {})
      : graph_(std::move(g)),
        theta_edges_(std::move(theta_edges)),
        theta_nodes_(std::move(theta_nodes)) {
    if (theta_nodes_.empty())
      theta_nodes_.assign(static_cast<std::size_t>(graph_.num_vertices()), 0.0);
    if (static_cast<int>(theta_edges_.size()) != graph_.num_edges())
      detail::fail(ErrorKind::invalid_argument, "IsingModel: one coupling per edge required");
    if (static_cast<int>(theta_nodes_.size()) != graph_.num_vertices())
      detail::fail(ErrorKind::invalid_argument, "IsingModel: one field per vertex required");
    for (double t : theta_edges_) check_parameter(t, "coupling");
    for (double t : theta_nodes_) check_parameter(t, "field");
  }

  /// Zero-field model with all couplings zero.
  static IsingModel zeros(Graph g) {
    std::vector<double> theta(static_cast<std::size_t>(g.num_edges()), 0.0);
    return IsingModel(std::move(g), std::move(theta));
  }

  const Graph& graph() const noexcept { return graph_; }
  int num_vertices() const noexcept { return graph_.num_vertices(); }
  int num_edges() const noexcept { return graph_.num_edges(); }
  const std::vector<double>& theta_edges() const noexcept { return theta_edges_; }
  const std::vector<double>& theta_nodes() const noexcept { return theta_nodes_; }

  bool zero_field() const {
    return std::all_of(theta_nodes_.begin(), theta_nodes_.end(),
                       [](double t) { return t == 0.0; });
  }

 private:
  static void check_parameter(double t, const char* what) {
    if (!std::isfinite(t))
      detail::fail(ErrorKind::invalid_argument, std::string("IsingModel: non-finite ") + what);
    if (std::abs(t) > kMaxCoupling)
      detail::fail(ErrorKind::numerical, std::string("IsingModel: |") + what +
                                             "| exceeds the cap of 30 (target not realizable?)");
  }

  Graph graph_;
  std::vector<double> theta_edges_;
  std::vector<double> theta_nodes_;
};

/// First moments mu_i = E[x_i] and the symmetric matrix of pairwise moments
/// mu_ij = E[x_i x_j] with unit diagonal.
struct MomentSet {
  int n = 0;
  std::vector<double> mu_nodes;
  Eigen::MatrixXd mu_pairs;

  static MomentSet independent(int n) {
    return {n, std::vector<double>(static_cast<std::size_t>(n), 0.0),
            Eigen::MatrixXd::Identity(n, n)};
  }
};

/// Joint table of (x_i, x_j); index 0 is spin -1 and index 1 is spin +1.
struct PairMarginal {
  std::array<std::array<double, 2>, 2> p{};

  double operator()(int xi, int xj) const { return p[xi > 0 ? 1 : 0][xj > 0 ? 1 : 0]; }
};

/// P(x_i, x_j) = (1 + mu_i x_i + mu_j x_j + mu_ij x_i x_j) / 4. Entries below
/// -1e-12 mean the triple is not realizable; smaller negatives are rounding
/// and clip to zero.
inline PairMarginal edge_marginal(double mu_i, double mu_j, double mu_ij) {
  for (double m : {mu_i, mu_j, mu_ij})
    if (!(m >= -1.0 && m <= 1.0))
      detail::fail(ErrorKind::data, "edge_marginal: moment outside [-1, 1]");
  PairMarginal out;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double xi = a ? 1.0 : -1.0, xj = b ? 1.0 : -1.0;
      double v = 0.25 * (1.0 + mu_i * xi + mu_j * xj + mu_ij * xi * xj);
      if (v < -1e-12)
        detail::fail(ErrorKind::data, "edge_marginal: infeasible moment triple (negative probability)");
      out.p[a][b] = std::max(v, 0.0);
    }
  }
  return out;
}

/// Checks the MomentSet invariants: shape, range, symmetry, unit diagonal and
/// feasibility of every pairwise marginal.
inline void validate(const MomentSet& m, double tol = 1e-9) {
  if (m.n < 1) detail::fail(ErrorKind::data, "moments: n must be at least 1");
  if (static_cast<int>(m.mu_nodes.size()) != m.n || m.mu_pairs.rows() != m.n ||
      m.mu_pairs.cols() != m.n)
    detail::fail(ErrorKind::data, "moments: dimension mismatch");
  for (double v : m.mu_nodes)
    if (!(std::abs(v) <= 1.0 + tol)) detail::fail(ErrorKind::data, "moments: |mu_i| > 1");
  for (int i = 0; i < m.n; ++i) {
    if (std::abs(m.mu_pairs(i, i) - 1.0) > tol)
      detail::fail(ErrorKind::data, "moments: diagonal of mu_pairs must be 1");
    for (int j = i + 1; j < m.n; ++j) {
      const double a = m.mu_pairs(i, j), b = m.mu_pairs(j, i);
      if (!std::isfinite(a) || std::abs(a - b) > tol)
        detail::fail(ErrorKind::data, "moments: mu_pairs not symmetric");
      edge_marginal(std::clamp(m.mu_nodes[i], -1.0, 1.0), std::clamp(m.mu_nodes[j], -1.0, 1.0),
                    std::clamp(a, -1.0, 1.0));
    }
  }
}

/// Symmetrizes mu_pairs, restores the unit diagonal, and clamps every
/// off-diagonal and first moment into [-1 + clamp, 1 - clamp].
inline MomentSet clean(const MomentSet& m, double clamp) {
  MomentSet out = m;
  out.mu_pairs = 0.5 * (m.mu_pairs + m.mu_pairs.transpose());
  const double hi = 1.0 - clamp;
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j)
      out.mu_pairs(i, j) = i == j ? 1.0 : std::clamp(out.mu_pairs(i, j), -hi, hi);
    out.mu_nodes[i] = std::clamp(out.mu_nodes[i], -hi, hi);
  }
  return out;
}

}  // namespace planar_ising
