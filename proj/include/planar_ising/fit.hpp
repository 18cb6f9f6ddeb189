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

// Maximum-likelihood couplings on a fixed planar graph. The objective
//
//   L(theta) = sum_ij (mu_ij theta_ij - log cosh theta_ij) - 1/2 log det(I - W)
//
// is concave with gradient target_mu - mu(theta) and Hessian -H(theta), so
// the Newton step is H^{-1} (target_mu - mu(theta)).

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "planar_ising/embedding.hpp"
#include "planar_ising/error.hpp"
#include "planar_ising/kacward.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising {

struct FitConfig {
  double gradient_tolerance = 1e-8;  // on max |target - mu(theta)|
  int max_newton_iters = 50;
  double backtrack_shrink = 0.5;
  double sufficient_decrease = 0.25;
  double hessian_ridge = 0.0;
  int hessian_refresh_every = 1;

  void validate() const {
    if (!(gradient_tolerance > 0.0))
      detail::fail(ErrorKind::invalid_argument, "FitConfig: gradient_tolerance must be positive");
    if (max_newton_iters < 0)
      detail::fail(ErrorKind::invalid_argument, "FitConfig: max_newton_iters must be >= 0");
    if (!(backtrack_shrink > 0.0 && backtrack_shrink < 1.0))
      detail::fail(ErrorKind::invalid_argument, "FitConfig: backtrack_shrink must lie in (0, 1)");
    if (!(sufficient_decrease > 0.0 && sufficient_decrease < 0.5))
      detail::fail(ErrorKind::invalid_argument,
                   "FitConfig: sufficient_decrease must lie in (0, 0.5)");
    if (!(hessian_ridge >= 0.0))
      detail::fail(ErrorKind::invalid_argument, "FitConfig: hessian_ridge must be >= 0");
    if (hessian_refresh_every < 1)
      detail::fail(ErrorKind::invalid_argument, "FitConfig: hessian_refresh_every must be >= 1");
  }
};

struct FitReport {
  std::vector<double> theta;
  double log_likelihood = 0.0;  // target . theta - log Z(theta), per sample
  double objective = 0.0;       // log_likelihood + n log 2
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostic;
  std::vector<std::string> warnings;
  std::vector<double> objective_trace;  // initial point, then each accepted step
};

/// Targets closer to +-1 than this are pulled in; |mu| = 1 needs infinite theta.
inline constexpr double kTargetClamp = 1e-6;

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline void check_targets(std::span<const double> target, int edges) {
  if (static_cast<int>(target.size()) != edges)
    fail(ErrorKind::invalid_argument, "fit: one target moment per edge required");
  for (double t : target)
    if (!(t >= -1.0 && t <= 1.0)) fail(ErrorKind::data, "fit: target moment outside [-1, 1]");
}

}  // namespace detail

/// L(theta) for the embedded graph, equal to target . theta - log Z + n log 2.
inline double objective(std::span<const double> theta, std::span<const double> target,
                        const PlanarEmbedding& emb) {
  detail::check_targets(target, emb.graph().num_edges());
  IsingModel model(emb.graph(), std::vector<double>(theta.begin(), theta.end()));
  return detail::dot(target, theta) - log_partition(model, emb) +
         emb.graph().num_vertices() * std::numbers::ln2;
}

/// Newton ascent with Armijo backtracking, starting from `initial` (zeros if
/// empty). Non-convergence is reported, not thrown; a Hessian that stays
/// unusable after ridge escalation throws.
inline FitReport fit_ml(const PlanarEmbedding& emb, std::span<const double> target_in,
                        const FitConfig& cfg, std::span<const double> initial = {}) {
  cfg.validate();
  const Graph& g = emb.graph();
  const int m = g.num_edges();
  const double nlog2 = g.num_vertices() * std::numbers::ln2;
  detail::check_targets(target_in, m);

  FitReport report;
  std::vector<double> target(target_in.begin(), target_in.end());
  int clamped = 0;
  for (double& t : target) {
    const double c = std::clamp(t, -1.0 + kTargetClamp, 1.0 - kTargetClamp);
    clamped += c != t;
    t = c;
  }
  if (clamped)
    report.warnings.push_back(std::to_string(clamped) + " target moment(s) clamped to +-(1 - 1e-6)");

  std::vector<double> theta(static_cast<std::size_t>(m), 0.0);
  if (!initial.empty()) {
    if (static_cast<int>(initial.size()) != m)
      detail::fail(ErrorKind::invalid_argument, "fit: initial theta has wrong length");
    theta.assign(initial.begin(), initial.end());
  }

  auto eval_at = [&](const std::vector<double>& th, KacWardOutputs what) {
    return evaluate(IsingModel(g, th), emb, what);
  };

  double ridge = cfg.hessian_ridge;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> factor;
  Eigen::MatrixXd hess;
  int since_refresh = 0;

  KacWardEvaluation cur = eval_at(theta, KacWardOutputs::hessian);
  hess = *cur.hessian;
  double f = detail::dot(target, theta) - cur.log_partition + nlog2;
  report.objective_trace.push_back(f);

  std::vector<double> grad(static_cast<std::size_t>(m));
  for (int iter = 0;; ++iter) {
    for (int e = 0; e < m; ++e) grad[e] = target[e] - cur.moments[e];
    report.grad_norm = detail::max_abs(grad);
    report.iterations = iter;
    if (report.grad_norm <= cfg.gradient_tolerance) {
      report.converged = true;
      break;
    }
    if (iter >= cfg.max_newton_iters) {
      report.diagnostic = "Newton iteration limit reached";
      break;
    }

    const Eigen::Map<const Eigen::VectorXd> gvec(grad.data(), m);
    Eigen::VectorXd step;
    int escalations = 0;
    while (true) {
      if (!factor) {
        factor.emplace(hess + ridge * Eigen::MatrixXd::Identity(m, m));
        since_refresh = 0;
      }
      bool ok = factor->info() == Eigen::Success;
      if (ok) {
        step = factor->solve(gvec);
        ok = step.allFinite() && gvec.dot(step) > 0.0;
      }
      if (ok) break;
      if (since_refresh > 0) {
        // stale Hessian; rebuild it at the current point before escalating
        hess = *eval_at(theta, KacWardOutputs::hessian).hessian;
        factor.reset();
        continue;
      }
      if (++escalations > 6)
        detail::fail(ErrorKind::numerical, "fit: Hessian solve failed after ridge escalation");
      ridge = ridge > 0.0 ? ridge * 10.0 : 1e-10;
      factor.reset();
    }

    // Armijo backtracking; trial points beyond the coupling cap are shrunk.
    const double slope = gvec.dot(step);
    const double slack = 1e-14 * std::max(1.0, std::abs(f));
    double lambda = 1.0;
    std::vector<double> trial(static_cast<std::size_t>(m));
    bool accepted = false;
    double f_trial = f;
    for (int shrink = 0; shrink < 60; ++shrink, lambda *= cfg.backtrack_shrink) {
      for (int e = 0; e < m; ++e) trial[e] = theta[e] + lambda * step(e);
      if (detail::max_abs(trial) > kMaxCoupling) continue;
      try {
        f_trial = detail::dot(target, trial) -
                  eval_at(trial, KacWardOutputs::log_partition).log_partition + nlog2;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::numerical) throw;
        continue;  // lost precision this far out; shorten the step
      }
      if (f_trial >= f + cfg.sufficient_decrease * lambda * slope - slack) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.diagnostic = detail::max_abs(theta) > 0.5 * kMaxCoupling
                              ? "line search stalled near the |theta| <= 30 cap; target moments are "
                                "likely not realizable on this graph"
                              : "line search failed to find an ascent step";
      break;
    }

    theta = trial;
    ++since_refresh;
    const bool refresh = since_refresh >= cfg.hessian_refresh_every;
    cur = eval_at(theta, refresh ? KacWardOutputs::hessian : KacWardOutputs::moments);
    if (refresh) {
      hess = *cur.hessian;
      factor.reset();
    }
    f = detail::dot(target, theta) - cur.log_partition + nlog2;
    report.objective_trace.push_back(f);
  }

  if (!report.converged && detail::max_abs(theta) >= 0.999 * kMaxCoupling &&
      report.diagnostic.find("cap") == std::string::npos)
    report.diagnostic += "; couplings reached the |theta| <= 30 cap (targets not realizable?)";

  report.theta = std::move(theta);
  report.objective = f;
  report.log_likelihood = f - nlog2;
  return report;
}

/// Convenience overload that embeds the graph first.
inline FitReport fit_ml(const Graph& g, std::span<const double> target, const FitConfig& cfg,
                        std::span<const double> initial = {}) {
  return fit_ml(straight_line_embed(g), target, cfg, initial);
}

}  // namespace planar_ising
