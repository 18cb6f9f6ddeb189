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

// Exact inference by enumerating all 2^n spin configurations. Used as ground
// truth for the determinant-based routines, so it shares no code with them.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "planar_ising/error.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising {

inline constexpr int kMaxOracleVertices = 24;

/// Probabilities of all 2^n configurations; bit b of the index set means
/// x_b = +1.
struct StateDistribution {
  int n = 0;
  std::vector<double> probs;
};

namespace detail {

/// Neumaier compensated summation in extended precision.
class CompensatedSum {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

inline void require_oracle_size(int n) {
  if (n > kMaxOracleVertices)
    fail(ErrorKind::size, "oracle: n = " + std::to_string(n) + " exceeds the enumeration cap of " +
                              std::to_string(kMaxOracleVertices));
}

inline long double state_energy(const IsingModel& model, std::uint32_t state) {
  auto spin = [state](Vertex v) { return (state >> v) & 1u ? 1.0L : -1.0L; };
  long double e = 0.0L;
  const auto& fields = model.theta_nodes();
  for (Vertex v = 0; v < model.num_vertices(); ++v) e += fields[v] * spin(v);
  const auto& edges = model.graph().edges();
  const auto& theta = model.theta_edges();
  for (std::size_t k = 0; k < edges.size(); ++k) e += theta[k] * spin(edges[k].u) * spin(edges[k].v);
  return e;
}

/// Log partition function together with the maximum energy used as shift.
inline long double enum_log_partition_ld(const IsingModel& model) {
  require_oracle_size(model.num_vertices());
  const std::uint32_t states = 1u << model.num_vertices();
  long double shift = -std::numeric_limits<long double>::infinity();
  for (std::uint32_t s = 0; s < states; ++s) shift = std::max(shift, state_energy(model, s));
  CompensatedSum z;
  for (std::uint32_t s = 0; s < states; ++s) z.add(std::exp(state_energy(model, s) - shift));
  return shift + std::log(z.value());
}

}  // namespace detail

inline double enum_log_partition(const IsingModel& model) {
  return static_cast<double>(detail::enum_log_partition_ld(model));
}

inline StateDistribution enum_distribution(const IsingModel& model) {
  const long double logz = detail::enum_log_partition_ld(model);
  StateDistribution out{model.num_vertices(), {}};
  const std::uint32_t states = 1u << model.num_vertices();
  out.probs.resize(states);
  for (std::uint32_t s = 0; s < states; ++s)
    out.probs[s] = static_cast<double>(std::exp(detail::state_energy(model, s) - logz));
  return out;
}

/// Exact first moments and pairwise moments over all vertex pairs.
inline MomentSet enum_moments(const IsingModel& model) {
  const int n = model.num_vertices();
  const long double logz = detail::enum_log_partition_ld(model);
  const std::uint32_t states = 1u << n;
  std::vector<detail::CompensatedSum> first(static_cast<std::size_t>(n));
  std::vector<detail::CompensatedSum> second(static_cast<std::size_t>(n * n));
  std::vector<long double> x(static_cast<std::size_t>(n));
  for (std::uint32_t s = 0; s < states; ++s) {
    const long double p = std::exp(detail::state_energy(model, s) - logz);
    for (int i = 0; i < n; ++i) x[i] = (s >> i) & 1u ? 1.0L : -1.0L;
    for (int i = 0; i < n; ++i) {
      first[i].add(p * x[i]);
      for (int j = i + 1; j < n; ++j) second[i * n + j].add(p * x[i] * x[j]);
    }
  }
  MomentSet out = MomentSet::independent(n);
  for (int i = 0; i < n; ++i) {
    out.mu_nodes[i] = static_cast<double>(first[i].value());
    for (int j = i + 1; j < n; ++j)
      out.mu_pairs(i, j) = out.mu_pairs(j, i) = static_cast<double>(second[i * n + j].value());
  }
  return out;
}

/// KL divergence D(p || q) in nats.
inline double enum_divergence(const StateDistribution& p, const StateDistribution& q) {
  if (p.n != q.n || p.probs.size() != q.probs.size())
    detail::fail(ErrorKind::invalid_argument, "enum_divergence: distributions over different n");
  detail::CompensatedSum d;
  for (std::size_t s = 0; s < p.probs.size(); ++s) {
    const double ps = p.probs[s];
    if (ps <= 0.0) continue;
    if (q.probs[s] <= 0.0)
      detail::fail(ErrorKind::data, "enum_divergence: q(x) = 0 where p(x) > 0");
    d.add(static_cast<long double>(ps) * std::log(static_cast<long double>(ps) / q.probs[s]));
  }
  return static_cast<double>(d.value());
}

/// Shannon entropy in nats.
inline double enum_entropy(const StateDistribution& p) {
  detail::CompensatedSum h;
  for (double ps : p.probs)
    if (ps > 0.0) h.add(-static_cast<long double>(ps) * std::log(static_cast<long double>(ps)));
  return static_cast<double>(h.value());
}

}  // namespace planar_ising
