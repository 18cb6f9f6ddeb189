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

// Auxiliary-vertex construction: a model with fields theta_i on n vertices
// is the x_aux = +1 conditional of a zero-field model on n + 1 vertices whose
// extra edges {i, aux} carry theta_i. Then Z_ext = 2 Z, E_ext[x_i x_aux] =
// E[x_i] and pair moments among the original vertices agree.

#pragma once

#include <vector>

#include "planar_ising/error.hpp"
#include "planar_ising/graph.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising {

/// Zero-mean moments on n + 1 variables; the last one is the auxiliary.
inline MomentSet extend_moments(const MomentSet& m) {
  const int n = m.n;
  MomentSet out = MomentSet::independent(n + 1);
  out.mu_pairs.topLeftCorner(n, n) = m.mu_pairs;
  for (int i = 0; i < n; ++i) out.mu_pairs(i, n) = out.mu_pairs(n, i) = m.mu_nodes[i];
  return out;
}

/// Zero-field model on n + 1 vertices with auxiliary vertex n. Original
/// edges keep their ids; star edges {i, n} follow in vertex order. With
/// `all_star_edges` false, only vertices with a non-zero field get one.
inline IsingModel extend_model(const IsingModel& model, bool all_star_edges = true) {
  const int n = model.num_vertices();
  Graph g(n + 1);
  std::vector<double> theta = model.theta_edges();
  for (const Edge& e : model.graph().edges()) g.add_edge(e.u, e.v);
  for (Vertex i = 0; i < n; ++i) {
    const double field = model.theta_nodes()[i];
    if (!all_star_edges && field == 0.0) continue;
    g.add_edge(i, n);
    theta.push_back(field);
  }
  return IsingModel(std::move(g), std::move(theta));
}

/// Inverse of extend_model: drops `aux`, turns its couplings into fields and
/// renumbers the remaining vertices in order.
inline IsingModel contract_model(const IsingModel& extended, Vertex aux) {
  const int big = extended.num_vertices();
  if (aux < 0 || aux >= big)
    detail::fail(ErrorKind::invalid_argument, "contract_model: auxiliary vertex out of range");
  if (!extended.zero_field())
    detail::fail(ErrorKind::invalid_argument, "contract_model: extended model must be zero-field");
  auto renumber = [aux](Vertex v) { return v < aux ? v : v - 1; };
  Graph g(big - 1);
  std::vector<double> theta;
  std::vector<double> fields(static_cast<std::size_t>(big - 1), 0.0);
  const auto& edges = extended.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    const double t = extended.theta_edges()[k];
    if (e.u == aux || e.v == aux) {
      fields[renumber(e.u == aux ? e.v : e.u)] = t;
      continue;
    }
    g.add_edge(renumber(e.u), renumber(e.v));
    theta.push_back(t);
  }
  return IsingModel(std::move(g), std::move(theta), std::move(fields));
}

}  // namespace planar_ising
