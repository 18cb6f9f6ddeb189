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

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "planar_ising/embedding.hpp"
#include "planar_ising/error.hpp"
#include "planar_ising/graph.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising {

/// Tolerance on imaginary residues of quantities that must be real.
inline constexpr double kImaginaryTolerance = 1e-8;

/// Kac-Ward matrices over directed edges: `phase` holds exp(i * phi_ijl / 2)
/// at (ij, jl) for l != i, and `weight` holds tanh(theta) for both
/// orientations of every edge. W = phase * diag(weight).
struct KacWardSystem {
  DirectedEdgeIndex index;
  Eigen::MatrixXcd phase;
  Eigen::VectorXd weight;

  Eigen::MatrixXcd transfer() const { return phase * weight.asDiagonal(); }
};

namespace detail {

inline void require_zero_field(const IsingModel& model, const char* op) {
  if (!model.zero_field())
    fail(ErrorKind::invalid_argument,
         std::string(op) + ": model has non-zero fields; extend it with an auxiliary "
                           "vertex (extend_model) and evaluate the zero-field extension");
}

inline void require_matching_embedding(const IsingModel& model, const PlanarEmbedding& emb) {
  const Graph& g = model.graph();
  const Graph& h = emb.graph();
  bool ok = g.num_vertices() == h.num_vertices() && g.num_edges() == h.num_edges();
  for (int e = 0; ok && e < g.num_edges(); ++e) ok = h.has_edge(g.edge(e).u, g.edge(e).v);
  if (!ok) fail(ErrorKind::invalid_argument, "embedding does not embed the model graph");
}

/// log cosh without overflow.
inline double log_cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

}  // namespace detail

inline KacWardSystem build_system(const IsingModel& model, const PlanarEmbedding& emb) {
  detail::require_zero_field(model, "build_system");
  detail::require_matching_embedding(model, emb);
  const Graph& g = model.graph();
  KacWardSystem sys{DirectedEdgeIndex(g), {}, {}};
  const int dim = sys.index.size();
  sys.phase = Eigen::MatrixXcd::Zero(dim, dim);
  sys.weight.resize(dim);

  const auto adj = g.adjacency();
  for (int a = 0; a < dim; ++a) {
    const Vertex i = sys.index.tail(a), j = sys.index.head(a);
    sys.weight(a) = std::tanh(model.theta_edges()[DirectedEdgeIndex::undirected(a)]);
    for (Vertex l : adj[j]) {
      if (l == i) continue;
      const int b = sys.index.directed(g, j, l);
      const double phi = turning_angle(emb, i, j, l);
      sys.phase(a, b) = std::polar(1.0, 0.5 * phi);
    }
  }
  return sys;
}

/// Results of one factorization of I - W. `moments` is empty unless
/// requested; `hessian` likewise.
struct KacWardEvaluation {
  double log_partition = 0.0;
  std::vector<double> moments;
  std::optional<Eigen::MatrixXd> hessian;
};

enum class KacWardOutputs { log_partition, moments, hessian };

/// Evaluates log Z and optionally the edge moments and the Hessian of log Z.
/// W is block diagonal over connected components; each block is factorized
/// on its own with complex partial-pivoting LU. With `only` non-empty and
/// outputs == moments, just those edges get moments (the rest are NaN),
/// which needs a few rows of (I - W)^{-1} instead of all of S.
inline KacWardEvaluation evaluate(const IsingModel& model, const PlanarEmbedding& emb,
                                  KacWardOutputs outputs = KacWardOutputs::log_partition,
                                  std::span<const int> only = {}) {
  const KacWardSystem sys = build_system(model, emb);
  const Graph& g = model.graph();
  const int m = g.num_edges();
  const bool want_moments = outputs != KacWardOutputs::log_partition;
  const bool want_hessian = outputs == KacWardOutputs::hessian;
  const bool subset = outputs == KacWardOutputs::moments && !only.empty();
  std::vector<char> selected;
  if (subset) {
    selected.assign(static_cast<std::size_t>(m), 0);
    for (int e : only) {
      if (e < 0 || e >= m) detail::fail(ErrorKind::invalid_argument, "evaluate: edge id out of range");
      selected[e] = 1;
    }
  }

  KacWardEvaluation out;
  double logz = g.num_vertices() * std::numbers::ln2;
  for (double t : model.theta_edges()) logz += detail::log_cosh(t);

  if (want_moments)
    out.moments.assign(static_cast<std::size_t>(m),
                       subset ? std::numeric_limits<double>::quiet_NaN() : 0.0);
  if (want_hessian) out.hessian = Eigen::MatrixXd::Zero(m, m);

  const Components comp = connected_components(g);
  std::vector<std::vector<int>> blocks(static_cast<std::size_t>(comp.count));
  for (int e = 0; e < m; ++e) blocks[comp.label[g.edge(e).u]].push_back(e);

  for (const auto& edges : blocks) {
    if (edges.empty()) continue;
    const int k = static_cast<int>(edges.size());
    std::vector<int> dir;
    dir.reserve(2 * edges.size());
    for (int e : edges) {
      dir.push_back(2 * e);
      dir.push_back(2 * e + 1);
    }
    Eigen::MatrixXcd a(2 * k, 2 * k);
    Eigen::VectorXd w(2 * k);
    for (int r = 0; r < 2 * k; ++r) {
      w(r) = sys.weight(dir[r]);
      for (int c = 0; c < 2 * k; ++c) a(r, c) = sys.phase(dir[r], dir[c]);
    }
    const Eigen::MatrixXcd lhs =
        Eigen::MatrixXcd::Identity(2 * k, 2 * k) - a * w.asDiagonal();
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(lhs);

    std::complex<double> logdet = lu.permutationP().determinant() < 0
                                      ? std::complex<double>(0.0, std::numbers::pi)
                                      : std::complex<double>(0.0, 0.0);
    const auto& packed = lu.matrixLU();
    for (int r = 0; r < 2 * k; ++r) {
      const std::complex<double> pivot = packed(r, r);
      if (pivot == std::complex<double>(0.0, 0.0))
        detail::fail(ErrorKind::numerical, "Kac-Ward: I - W is singular");
      logdet += std::log(pivot);
    }
    const double residue = detail::wrap_angle(logdet.imag());
    if (!(std::abs(residue) <= kImaginaryTolerance))
      detail::fail(ErrorKind::numerical,
                   "Kac-Ward: det(I - W) is not real positive (Im log det = " +
                       std::to_string(residue) + "); embedding or matrix construction is broken");
    if (!std::isfinite(logdet.real()))
      detail::fail(ErrorKind::numerical, "Kac-Ward: non-finite log det");
    logz += 0.5 * logdet.real();

    if (!want_moments) continue;

    auto edge_moment = [&](int q, std::complex<double> s_fwd, std::complex<double> s_bwd) {
      const double we = w(2 * q);
      const std::complex<double> mu = we - 0.5 * (1.0 - we * we) * (s_fwd + s_bwd);
      if (!(std::abs(mu.imag()) <= kImaginaryTolerance))
        detail::fail(ErrorKind::numerical, "Kac-Ward: complex edge moment");
      return mu.real();
    };

    if (subset) {
      std::vector<int> local;
      for (int q = 0; q < k; ++q)
        if (selected[edges[q]]) local.push_back(q);
      if (local.empty()) continue;
      // row r of (I - W)^{-1} is column r of the transposed inverse
      const int c = static_cast<int>(local.size());
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(2 * k, 2 * c);
      for (int t = 0; t < c; ++t) {
        unit(2 * local[t], 2 * t) = 1.0;
        unit(2 * local[t] + 1, 2 * t + 1) = 1.0;
      }
      const Eigen::MatrixXcd rows = lu.transpose().solve(unit);
      for (int t = 0; t < c; ++t) {
        const int q = local[t];
        const std::complex<double> s_fwd = (rows.col(2 * t).array() * a.col(2 * q).array()).sum();
        const std::complex<double> s_bwd = (rows.col(2 * t + 1).array() * a.col(2 * q + 1).array()).sum();
        out.moments[edges[q]] = edge_moment(q, s_fwd, s_bwd);
      }
      continue;
    }

    // Only diag(S) is needed for moments; a selected-inversion routine would
    // avoid forming all of S = (I - W)^{-1} A.
    const Eigen::MatrixXcd s = lu.solve(a);
    std::vector<double> block_mu(static_cast<std::size_t>(k));
    std::vector<double> slope(static_cast<std::size_t>(k));
    for (int q = 0; q < k; ++q) {
      const double we = w(2 * q);
      slope[q] = 1.0 - we * we;
      block_mu[q] = edge_moment(q, s(2 * q, 2 * q), s(2 * q + 1, 2 * q + 1));
      out.moments[edges[q]] = block_mu[q];
    }

    if (!want_hessian) continue;

    Eigen::MatrixXd& h = *out.hessian;
    for (int p = 0; p < k; ++p) {
      h(edges[p], edges[p]) = 1.0 - block_mu[p] * block_mu[p];
      for (int q = p + 1; q < k; ++q) {
        std::complex<double> t(0.0, 0.0);
        for (int x = 2 * p; x < 2 * p + 2; ++x)
          for (int y = 2 * q; y < 2 * q + 2; ++y) t += s(x, y) * s(y, x);
        const std::complex<double> v = -0.5 * slope[p] * t * slope[q];
        if (!(std::abs(v.imag()) <= kImaginaryTolerance))
          detail::fail(ErrorKind::numerical, "Kac-Ward: complex Hessian entry");
        h(edges[p], edges[q]) = v.real();
        h(edges[q], edges[p]) = v.real();
      }
    }
  }
  out.log_partition = logz;
  return out;
}

/// log Z = n log 2 + sum_E log cosh(theta_ij) + (1/2) log det(I - W).
inline double log_partition(const IsingModel& model, const PlanarEmbedding& emb) {
  return evaluate(model, emb, KacWardOutputs::log_partition).log_partition;
}

/// E[x_i x_j] for every edge, in edge-id order.
inline std::vector<double> moments(const IsingModel& model, const PlanarEmbedding& emb) {
  return evaluate(model, emb, KacWardOutputs::moments).moments;
}

/// E[x_i x_j] for the listed edge ids, in the order given.
inline std::vector<double> moments(const IsingModel& model, const PlanarEmbedding& emb,
                                   std::span<const int> edge_ids) {
  if (edge_ids.empty()) return {};
  const auto all = evaluate(model, emb, KacWardOutputs::moments, edge_ids).moments;
  std::vector<double> out;
  out.reserve(edge_ids.size());
  for (int e : edge_ids) out.push_back(all[e]);
  return out;
}

/// Hessian of log Z with respect to the couplings (covariance of the edge
/// statistics).
inline Eigen::MatrixXd hessian(const IsingModel& model, const PlanarEmbedding& emb) {
  return *evaluate(model, emb, KacWardOutputs::hessian).hessian;
}

}  // namespace planar_ising
