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

// Correlations of non-adjacent pairs: a zero coupling leaves the distribution
// unchanged, so E[x_i x_j] for a non-edge is the Kac-Ward moment of the edge
// {i, j} added with theta = 0, provided the graph stays planar.

#pragma once

#include <algorithm>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "planar_ising/embedding.hpp"
#include "planar_ising/error.hpp"
#include "planar_ising/extension.hpp"
#include "planar_ising/graph.hpp"
#include "planar_ising/kacward.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising {

struct CandidateMoments {
  std::vector<double> values;  // aligned with the requested pairs
  int batches = 0;
};

namespace detail {

inline int max_planar_edges(int n) { return n >= 3 ? 3 * n - 6 : n * (n - 1) / 2; }

}  // namespace detail

/// Model correlations E[x_i x_j] for each pair in `delta`; every pair must
/// be a non-edge whose addition keeps g planar. Pairs are packed in order
/// into planar supergraphs of g as zero-coupling edges; each supergraph
/// costs one Kac-Ward evaluation.
inline CandidateMoments candidate_moments(const Graph& g, std::span<const double> theta,
                                          const std::vector<Edge>& delta) {
  const int n = g.num_vertices();
  if (static_cast<int>(theta.size()) != g.num_edges())
    detail::fail(ErrorKind::invalid_argument, "candidate_moments: one coupling per edge required");
  for (const Edge& e : delta) {
    if (e.u < 0 || e.v >= n || e.u == e.v)
      detail::fail(ErrorKind::invalid_argument, "candidate_moments: pair out of range");
    if (g.has_edge(e.u, e.v))
      detail::fail(ErrorKind::invalid_argument, "candidate_moments: pair is already an edge");
  }

  CandidateMoments out;
  out.values.assign(delta.size(), 0.0);
  std::vector<std::size_t> remaining(delta.size());
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});
  const int cap = detail::max_planar_edges(n);

  while (!remaining.empty()) {
    // The first pair is in Delta(g), so g plus it is planar; embed that and
    // pack the rest into its faces.
    const Edge& first = delta[remaining.front()];
    Graph h = g.with_edge(first.u, first.v);
    if (!is_planar(h))
      detail::fail(ErrorKind::not_planar, "candidate_moments: pair {" + std::to_string(first.u) +
                                              ", " + std::to_string(first.v) +
                                              "} cannot be added without breaking planarity");
    detail::FacePacker packer(h);
    std::vector<std::size_t> packed{remaining.front()}, rest;
    for (std::size_t r = 1; r < remaining.size(); ++r) {
      const std::size_t k = remaining[r];
      const Edge& e = delta[k];
      if (h.num_edges() < cap && packer.try_add(e.u, e.v)) {
        h.add_edge(e.u, e.v);
        packed.push_back(k);
      } else {
        rest.push_back(k);
      }
    }
    std::vector<double> th(theta.begin(), theta.end());
    th.resize(static_cast<std::size_t>(h.num_edges()), 0.0);
    std::vector<int> ids;
    for (std::size_t k : packed) ids.push_back(*h.edge_id(delta[k].u, delta[k].v));
    const std::vector<double> mu = moments(IsingModel(h, std::move(th)), straight_line_embed(h), ids);
    for (std::size_t t = 0; t < packed.size(); ++t) out.values[packed[t]] = mu[t];
    ++out.batches;
    remaining = std::move(rest);
  }
  return out;
}

/// Exact marginal quantities of a planar model, with or without fields.
struct Inference {
  double log_partition = 0.0;
  std::vector<double> mu_nodes;
  std::vector<double> mu_edges;  // edge-id order
};

/// Zero-field models go straight to Kac-Ward. Otherwise the model is
/// extended with an auxiliary vertex joined to every vertex with a non-zero
/// field; log Z = log Z_ext - log 2 and mu_i = E_ext[x_i x_aux]. Throws
/// not_planar if the extension (or a needed zero edge) is not planar.
inline Inference infer(const IsingModel& model) {
  const Graph& g = model.graph();
  const int n = g.num_vertices();
  const int m = g.num_edges();
  Inference out;
  if (!is_planar(g)) detail::fail(ErrorKind::not_planar, "infer: model graph is not planar");
  if (model.zero_field()) {
    const auto r = evaluate(model, straight_line_embed(g), KacWardOutputs::moments);
    out.log_partition = r.log_partition;
    out.mu_nodes.assign(static_cast<std::size_t>(n), 0.0);
    out.mu_edges = r.moments;
    return out;
  }

  const IsingModel ext = extend_model(model, false);
  const Graph& eg = ext.graph();
  if (!is_planar(eg))
    detail::fail(ErrorKind::not_planar,
                 "infer: graph plus the auxiliary field vertex is not planar; use the exact "
                 "oracle for small models");
  const auto r = evaluate(ext, straight_line_embed(eg), KacWardOutputs::moments);
  out.log_partition = r.log_partition - std::numbers::ln2;
  out.mu_edges.assign(r.moments.begin(), r.moments.begin() + m);
  out.mu_nodes.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<Edge> missing;
  for (Vertex i = 0; i < n; ++i) {
    if (auto id = eg.edge_id(i, n)) {
      out.mu_nodes[i] = r.moments[*id];
    } else {
      missing.emplace_back(i, n);
    }
  }
  if (!missing.empty()) {
    const auto cm = candidate_moments(eg, ext.theta_edges(), missing);
    for (std::size_t k = 0; k < missing.size(); ++k) out.mu_nodes[missing[k].u] = cm.values[k];
  }
  return out;
}

}  // namespace planar_ising
