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

// Greedy forward selection of a planar graph. Every round scores each pair
// that can still be added by the KL divergence between its target pairwise
// marginal and the current model's; adding {i, j} and refitting lowers
// D(P, P_G) by at least that score.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "planar_ising/embedding.hpp"
#include "planar_ising/error.hpp"
#include "planar_ising/extension.hpp"
#include "planar_ising/fit.hpp"
#include "planar_ising/graph.hpp"
#include "planar_ising/inference.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising {

enum class LearnMode { zero_field, outer_planar, partial_outer_planar };

inline std::string to_string(LearnMode m) {
  switch (m) {
    case LearnMode::zero_field: return "zero-field";
    case LearnMode::outer_planar: return "outer-planar";
    case LearnMode::partial_outer_planar: return "partial-outer-planar";
  }
  return "unknown";
}

inline std::optional<LearnMode> parse_learn_mode(std::string_view s) {
  if (s == "zero-field" || s == "zero-field-planar") return LearnMode::zero_field;
  if (s == "outer-planar") return LearnMode::outer_planar;
  if (s == "partial-outer-planar") return LearnMode::partial_outer_planar;
  return std::nullopt;
}

struct LearnConfig {
  LearnMode mode = LearnMode::zero_field;
  double gain_threshold = 0.0;  // 0 adds an edge every round, as long as one fits
  std::optional<int> max_edges;      // edges the greedy loop may add
  std::optional<int> stop_at_edges;  // stop once the output model has this many couplings
  FitConfig fit;
  double moment_clamp = 1e-6;
};

/// One greedy round. Vertex ids are those of the learner graph, where the
/// auxiliary vertex (outer-planar modes) is n.
struct TraceStep {
  Edge edge;
  double score = 0.0;
  bool infinite_gain = false;
  double log_likelihood = 0.0;  // per sample, of the input-space model
  int candidates = 0;
  int fit_iterations = 0;
  std::vector<double> theta;  // learner-graph couplings after the refit
};

struct LearnTrace {
  LearnMode mode = LearnMode::zero_field;
  int num_variables = 0;
  bool auxiliary = false;
  std::vector<Edge> initial_edges;  // star edges in outer-planar mode
  std::vector<double> initial_theta;
  double initial_log_likelihood = 0.0;
  std::vector<TraceStep> steps;
  std::string stop_reason;
  bool completed = true;
  std::string diagnostic;
  std::vector<std::string> warnings;
};

struct LearnResult {
  IsingModel model;    // on the input variables
  IsingModel learner;  // zero-field model on the learner graph
  LearnTrace trace;
};

/// Pairwise moment triple (mu_i, mu_j, mu_ij).
struct PairMoments {
  double mu_i = 0.0;
  double mu_j = 0.0;
  double mu_ij = 0.0;
};

/// KL divergence between the 2x2 tables of `target` and `model`. Returns
/// +infinity when the model gives zero mass to a state the target supports.
inline double pairwise_kl(const PairMoments& target, const PairMoments& model) {
  const PairMarginal p = edge_marginal(target.mu_i, target.mu_j, target.mu_ij);
  const PairMarginal q = edge_marginal(model.mu_i, model.mu_j, model.mu_ij);
  double d = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double pa = p.p[a][b], qa = q.p[a][b];
      if (pa <= 0.0) continue;
      if (qa <= 0.0) return std::numeric_limits<double>::infinity();
      d += pa * std::log(pa / qa);
    }
  }
  return std::max(d, 0.0);
}

namespace detail {

inline int default_max_edges(LearnMode mode, int n) {
  switch (mode) {
    case LearnMode::zero_field: return max_planar_edges(n);
    case LearnMode::outer_planar: return max_planar_edges(n + 1) - n;
    case LearnMode::partial_outer_planar: return max_planar_edges(n + 1);
  }
  return 0;
}

inline double tie_tolerance(double score) { return std::max(1e-12, 1e-9 * std::abs(score)); }

inline std::vector<double> edge_targets(const Graph& g, const Eigen::MatrixXd& pairs) {
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(g.num_edges()));
  for (const Edge& e : g.edges()) t.push_back(pairs(e.u, e.v));
  return t;
}

inline int model_edge_count(const Graph& g, bool auxiliary) {
  if (!auxiliary) return g.num_edges();
  const Vertex aux = g.num_vertices() - 1;
  int c = 0;
  for (const Edge& e : g.edges()) c += e.v != aux;
  return c;
}

inline std::string pair_name(const Edge& e) {
  return "{" + std::to_string(e.u) + ", " + std::to_string(e.v) + "}";
}

/// The greedy loop on zero-mean targets, starting from `g` (which is fitted
/// first when it has edges).
inline LearnResult greedy_grow(const Eigen::MatrixXd& target, Graph g, int n_input,
                               const LearnConfig& cfg, LearnTrace trace) {
  const bool aux = trace.auxiliary;
  const double ll_shift = aux ? std::numbers::ln2 : 0.0;
  const int big = g.num_vertices();
  const int max_add = cfg.max_edges.value_or(default_max_edges(cfg.mode, n_input));

  std::vector<double> theta(static_cast<std::size_t>(g.num_edges()), 0.0);
  double ll = -big * std::numbers::ln2;
  trace.initial_edges = g.edges();
  if (g.num_edges() > 0) {
    const FitReport r = fit_ml(g, edge_targets(g, target), cfg.fit);
    for (const auto& w : r.warnings) trace.warnings.push_back("initial fit: " + w);
    if (!r.converged) {
      trace.completed = false;
      trace.diagnostic = "initial fit did not converge: " + r.diagnostic;
      trace.stop_reason = "fit failure";
      IsingModel learner(g, r.theta);
      IsingModel model = aux ? contract_model(learner, big - 1) : learner;
      return {std::move(model), std::move(learner), std::move(trace)};
    }
    theta = r.theta;
    ll = r.log_likelihood;
  }
  trace.initial_theta = theta;
  trace.initial_log_likelihood = ll + ll_shift;

  std::vector<Edge> delta;
  for (Vertex i = 0; i < big; ++i)
    for (Vertex j = i + 1; j < big; ++j)
      if (!g.has_edge(i, j)) delta.emplace_back(i, j);

  int added = 0;
  while (true) {
    if (cfg.stop_at_edges && model_edge_count(g, aux) >= *cfg.stop_at_edges) {
      trace.stop_reason = "reached stop_at_edges";
      break;
    }
    if (added >= max_add) {
      trace.stop_reason = "reached max_edges";
      break;
    }
    delta = planar_candidates(g, delta);
    if (delta.empty()) {
      trace.stop_reason = "graph is maximal planar";
      break;
    }
    const CandidateMoments cm = candidate_moments(g, theta, delta);

    std::vector<double> scores(delta.size());
    double top = -1.0;
    for (std::size_t k = 0; k < delta.size(); ++k) {
      scores[k] = pairwise_kl({0.0, 0.0, target(delta[k].u, delta[k].v)}, {0.0, 0.0, cm.values[k]});
      top = std::max(top, scores[k]);
    }
    // Symmetric inputs give exact ties that rounding would otherwise break;
    // the lexicographically first pair within the tolerance wins.
    const double floor = std::isinf(top) ? top : top - tie_tolerance(top);
    std::size_t best = 0;
    while (scores[best] < floor) ++best;
    const double best_score = scores[best];
    if (cfg.gain_threshold > 0.0 && !(best_score > cfg.gain_threshold)) {
      trace.stop_reason = "no candidate exceeds the gain threshold";
      break;
    }

    const Edge e = delta[best];
    Graph next = g.with_edge(e.u, e.v);
    std::vector<double> warm = theta;
    warm.push_back(0.0);
    const FitReport r = fit_ml(next, edge_targets(next, target), cfg.fit, warm);
    for (const auto& w : r.warnings) trace.warnings.push_back("fit after " + pair_name(e) + ": " + w);
    if (!r.converged) {
      trace.completed = false;
      trace.diagnostic = "fit did not converge after adding " + pair_name(e) + ": " + r.diagnostic;
      trace.stop_reason = "fit failure";
      break;
    }

    TraceStep step;
    step.edge = e;
    step.infinite_gain = std::isinf(best_score);
    step.score = best_score;
    step.log_likelihood = r.log_likelihood + ll_shift;
    step.candidates = static_cast<int>(delta.size());
    step.fit_iterations = r.iterations;
    step.theta = r.theta;
    trace.steps.push_back(std::move(step));

    g = std::move(next);
    theta = r.theta;
    delta.erase(delta.begin() + static_cast<std::ptrdiff_t>(best));
    ++added;
  }

  IsingModel learner(g, theta);
  IsingModel model = aux ? contract_model(learner, big - 1) : learner;
  return {std::move(model), std::move(learner), std::move(trace)};
}

inline void check_config(const LearnConfig& cfg, int n) {
  cfg.fit.validate();
  if (!(cfg.gain_threshold >= 0.0))
    fail(ErrorKind::invalid_argument, "learn: gain_threshold must be >= 0");
  if (!(cfg.moment_clamp >= 0.0 && cfg.moment_clamp < 1.0))
    fail(ErrorKind::invalid_argument, "learn: moment_clamp must lie in [0, 1)");
  const int cap = default_max_edges(cfg.mode, n);
  if (cfg.max_edges && (*cfg.max_edges < 0 || *cfg.max_edges > cap))
    fail(ErrorKind::invalid_argument,
         "learn: max_edges must lie in [0, " + std::to_string(cap) + "] for " + to_string(cfg.mode) +
             " mode with n = " + std::to_string(n));
  if (cfg.stop_at_edges && *cfg.stop_at_edges < 0)
    fail(ErrorKind::invalid_argument, "learn: stop_at_edges must be >= 0");
}

}  // namespace detail

/// Learns a planar model from moments. Zero-field mode ignores first
/// moments. Outer-planar mode works on the auxiliary-vertex extension,
/// starting from the fitted star {i, aux}; the partial variant starts from
/// the empty graph instead. Fit failure stops the loop with a diagnostic
/// and a partial trace (trace.completed = false).
inline LearnResult greedy_select(const MomentSet& moments, const LearnConfig& cfg) {
  validate(moments);
  const int n = moments.n;
  detail::check_config(cfg, n);
  const MomentSet m = clean(moments, cfg.moment_clamp);

  LearnTrace trace;
  trace.mode = cfg.mode;
  trace.num_variables = n;
  if (cfg.mode == LearnMode::zero_field)
    return detail::greedy_grow(m.mu_pairs, Graph(n), n, cfg, std::move(trace));

  trace.auxiliary = true;
  const MomentSet ext = extend_moments(m);
  Graph start(n + 1);
  if (cfg.mode == LearnMode::outer_planar)
    for (Vertex i = 0; i < n; ++i) start.add_edge(i, n);
  return detail::greedy_grow(ext.mu_pairs, std::move(start), n, cfg, std::move(trace));
}

/// greedy_select in outer-planar mode.
inline LearnResult outer_planar_learn(const MomentSet& moments, LearnConfig cfg) {
  cfg.mode = LearnMode::outer_planar;
  return greedy_select(moments, cfg);
}

}  // namespace planar_ising
