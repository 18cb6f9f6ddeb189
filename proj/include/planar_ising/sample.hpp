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
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "planar_ising/error.hpp"
#include "planar_ising/graph.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising {

/// S x n matrix of spins in {-1, +1}, row major.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(int samples, int variables)
      : samples_(samples), variables_(variables),
        data_(static_cast<std::size_t>(samples) * static_cast<std::size_t>(variables), 1) {
    if (samples < 0 || variables < 0)
      detail::fail(ErrorKind::invalid_argument, "SampleMatrix: negative dimension");
  }
  SampleMatrix(int samples, int variables, std::vector<std::int8_t> data)
      : samples_(samples), variables_(variables), data_(std::move(data)) {
    if (samples < 0 || variables < 0 ||
        data_.size() != static_cast<std::size_t>(samples) * static_cast<std::size_t>(variables))
      detail::fail(ErrorKind::data, "SampleMatrix: data size does not match dimensions");
    for (std::int8_t v : data_)
      if (v != 1 && v != -1) detail::fail(ErrorKind::data, "SampleMatrix: entries must be -1 or +1");
  }

  int num_samples() const { return samples_; }
  int num_variables() const { return variables_; }
  std::int8_t operator()(int s, int i) const { return data_[index(s, i)]; }
  void set(int s, int i, int spin) {
    if (spin != 1 && spin != -1) detail::fail(ErrorKind::data, "SampleMatrix: entries must be -1 or +1");
    data_[index(s, i)] = static_cast<std::int8_t>(spin);
  }
  const std::vector<std::int8_t>& data() const { return data_; }

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::size_t index(int s, int i) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(variables_) + static_cast<std::size_t>(i);
  }

  int samples_ = 0;
  int variables_ = 0;
  std::vector<std::int8_t> data_;
};

enum class SamplerInit { all_plus, uniform_random };

struct SamplerConfig {
  int burn_in = 1000;  // sweeps discarded
  int thin = 10;       // sweeps per retained sample
  std::uint64_t seed = 0;
  SamplerInit init = SamplerInit::all_plus;

  void validate() const {
    if (burn_in < 0) detail::fail(ErrorKind::invalid_argument, "SamplerConfig: burn_in must be >= 0");
    if (thin < 1) detail::fail(ErrorKind::invalid_argument, "SamplerConfig: thin must be >= 1");
  }
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Single-chain Gibbs sampler. A sweep updates vertices 0..n-1 in order from
/// P(x_i = +1 | rest) = 1 / (1 + exp(-2 (theta_i + sum_j theta_ij x_j))).
inline SampleMatrix gibbs_sample(const IsingModel& model, int num_samples, const SamplerConfig& cfg) {
  cfg.validate();
  if (num_samples < 1) detail::fail(ErrorKind::invalid_argument, "gibbs_sample: need at least one sample");
  const int n = model.num_vertices();
  const Graph& g = model.graph();

  std::vector<std::vector<std::pair<int, double>>> nbr(static_cast<std::size_t>(n));
  for (int e = 0; e < g.num_edges(); ++e) {
    nbr[g.edge(e).u].emplace_back(g.edge(e).v, model.theta_edges()[e]);
    nbr[g.edge(e).v].emplace_back(g.edge(e).u, model.theta_edges()[e]);
  }

  std::mt19937_64 rng(cfg.seed);
  std::vector<int> x(static_cast<std::size_t>(n), 1);
  if (cfg.init == SamplerInit::uniform_random)
    for (int& v : x) v = (rng() >> 63) ? 1 : -1;

  auto sweep = [&] {
    for (int i = 0; i < n; ++i) {
      double h = model.theta_nodes()[i];
      for (const auto& [j, t] : nbr[i]) h += t * x[j];
      const double p_plus = 1.0 / (1.0 + std::exp(-2.0 * h));
      x[i] = detail::unit_uniform(rng) < p_plus ? 1 : -1;
    }
  };

  for (int k = 0; k < cfg.burn_in; ++k) sweep();
  SampleMatrix out(num_samples, n);
  for (int s = 0; s < num_samples; ++s) {
    for (int k = 0; k < cfg.thin; ++k) sweep();
    for (int i = 0; i < n; ++i) out.set(s, i, x[i]);
  }
  return out;
}

/// Sample means of x_i and x_i x_j. Sums are exact integers, so the result
/// does not depend on summation order.
inline MomentSet empirical_moments(const SampleMatrix& samples) {
  const int s_count = samples.num_samples();
  const int n = samples.num_variables();
  if (s_count < 1) detail::fail(ErrorKind::data, "empirical_moments: no samples");
  if (n < 1) detail::fail(ErrorKind::data, "empirical_moments: no variables");
  std::vector<std::int64_t> first(static_cast<std::size_t>(n), 0);
  std::vector<std::int64_t> second(static_cast<std::size_t>(n) * n, 0);
  for (int s = 0; s < s_count; ++s) {
    for (int i = 0; i < n; ++i) {
      const int xi = samples(s, i);
      first[i] += xi;
      for (int j = i + 1; j < n; ++j) second[static_cast<std::size_t>(i) * n + j] += xi * samples(s, j);
    }
  }
  MomentSet m = MomentSet::independent(n);
  const double inv = 1.0 / s_count;
  for (int i = 0; i < n; ++i) {
    m.mu_nodes[i] = static_cast<double>(first[i]) * inv;
    for (int j = i + 1; j < n; ++j)
      m.mu_pairs(i, j) = m.mu_pairs(j, i) = static_cast<double>(second[static_cast<std::size_t>(i) * n + j]) * inv;
  }
  return m;
}

/// Zero-field grid model with couplings uniform on [-1, 1], redrawn until
/// |theta| >= min_abs.
inline IsingModel random_grid_model(int rows, int cols, std::uint64_t seed, double min_abs = 0.05) {
  if (rows < 1 || cols < 1) detail::fail(ErrorKind::invalid_argument, "random_grid_model: empty grid");
  if (!(min_abs >= 0.0 && min_abs < 1.0))
    detail::fail(ErrorKind::invalid_argument, "random_grid_model: min_abs must lie in [0, 1)");
  Graph g = grid_graph(rows, cols);
  std::mt19937_64 rng(seed);
  std::vector<double> theta;
  for (int e = 0; e < g.num_edges(); ++e) {
    double t;
    do {
      t = 2.0 * detail::unit_uniform(rng) - 1.0;
    } while (std::abs(t) < min_abs);
    theta.push_back(t);
  }
  return IsingModel(std::move(g), std::move(theta));
}

struct OuterPlanarModelSpec {
  int n = 12;
  int chords = 4;
  double min_coupling = 0.5;
  double max_coupling = 1.0;
  double max_field = 0.5;
};

/// Outer-planar model: the cycle 0, 1, ..., n-1 plus up to `chords`
/// non-crossing chords; couplings have magnitude uniform on [min, max] and a
/// random sign; fields are uniform on [-max_field, max_field].
inline IsingModel random_outer_planar_model(const OuterPlanarModelSpec& spec, std::uint64_t seed) {
  const int n = spec.n;
  if (n < 3) detail::fail(ErrorKind::invalid_argument, "random_outer_planar_model: need n >= 3");
  if (spec.chords < 0 || !(spec.min_coupling >= 0.0 && spec.min_coupling <= spec.max_coupling) ||
      !(spec.max_field >= 0.0))
    detail::fail(ErrorKind::invalid_argument, "random_outer_planar_model: bad parameters");
  std::mt19937_64 rng(seed);
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);

  // chords {a, b} and {c, d} cross iff exactly one of c, d lies strictly between a and b
  std::vector<Edge> chords;
  auto crosses = [](const Edge& p, const Edge& q) {
    auto inside = [&](int v) { return p.u < v && v < p.v; };
    const bool shares = p.u == q.u || p.u == q.v || p.v == q.u || p.v == q.v;
    return !shares && inside(q.u) != inside(q.v);
  };
  for (int attempt = 0; attempt < 1000 && static_cast<int>(chords.size()) < spec.chords; ++attempt) {
    const int a = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const int b = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (a == b || g.has_edge(a, b)) continue;
    const Edge c(a, b);
    bool ok = true;
    for (const Edge& d : chords) ok = ok && !crosses(c, d);
    if (!ok) continue;
    chords.push_back(c);
    g.add_edge(c.u, c.v);
  }

  std::vector<double> theta;
  for (int e = 0; e < g.num_edges(); ++e) {
    const double mag =
        spec.min_coupling + (spec.max_coupling - spec.min_coupling) * detail::unit_uniform(rng);
    theta.push_back((rng() >> 63) ? mag : -mag);
  }
  std::vector<double> fields;
  for (int i = 0; i < n; ++i) fields.push_back(spec.max_field * (2.0 * detail::unit_uniform(rng) - 1.0));
  return IsingModel(std::move(g), std::move(theta), std::move(fields));
}

}  // namespace planar_ising
