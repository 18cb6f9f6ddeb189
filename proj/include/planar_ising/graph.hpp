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
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "planar_ising/error.hpp"

namespace planar_ising {

using Vertex = int;

/// Unordered vertex pair, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on vertices [0, n). Edge ids follow insertion
/// order; per-edge data elsewhere in the library is indexed by edge id.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n) {
    detail::require(n >= 0, ErrorKind::invalid_argument,
                    "graph: vertex count must be non-negative");
  }

  Graph(int n, std::span<const Edge> edges) : Graph(n) {
    edges_.reserve(edges.size());
    for (const Edge& e : edges) add_edge(e.u, e.v);
  }

  int num_vertices() const noexcept { return n_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }

  std::optional<int> edge_id(Vertex a, Vertex b) const {
    if (!in_range(a) || !in_range(b) || a == b) return std::nullopt;
    auto it = lookup_.find(key(Edge(a, b)));
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(Vertex a, Vertex b) const { return edge_id(a, b).has_value(); }

  /// Adds {a,b} and returns its id. Rejects self-loops, duplicates and
  /// out-of-range endpoints.
  int add_edge(Vertex a, Vertex b) {
    if (!in_range(a) || !in_range(b))
      detail::fail(ErrorKind::invalid_argument,
                   "graph: edge endpoint out of range: {" + std::to_string(a) +
                       "," + std::to_string(b) + "}");
    if (a == b)
      detail::fail(ErrorKind::invalid_argument,
                   "graph: self-loop at vertex " + std::to_string(a));
    const Edge e(a, b);
    const int id = num_edges();
    if (!lookup_.emplace(key(e), id).second)
      detail::fail(ErrorKind::invalid_argument,
                   "graph: duplicate edge {" + std::to_string(e.u) + "," +
                       std::to_string(e.v) + "}");
    edges_.push_back(e);
    return id;
  }

  Graph with_edge(Vertex a, Vertex b) const {
    Graph g = *this;
    g.add_edge(a, b);
    return g;
  }

  std::vector<std::vector<Vertex>> adjacency() const {
    std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(n_));
    for (const Edge& e : edges_) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    return adj;
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n_), 0);
    for (const Edge& e : edges_) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }

 private:
  bool in_range(Vertex v) const noexcept { return v >= 0 && v < n_; }
  std::uint64_t key(const Edge& e) const noexcept {
    return static_cast<std::uint64_t>(e.u) * static_cast<std::uint64_t>(n_) +
           static_cast<std::uint64_t>(e.v);
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> lookup_;
};

/// Numbering of the 2|E| directed edges: edge id e yields 2e = (u -> v) and
/// 2e + 1 = (v -> u) with u < v, so reversal is `d ^ 1`.
class DirectedEdgeIndex {
 public:
  explicit DirectedEdgeIndex(const Graph& g) {
    tail_.reserve(2 * g.edges().size());
    head_.reserve(2 * g.edges().size());
    for (const Edge& e : g.edges()) {
      tail_.push_back(e.u);
      head_.push_back(e.v);
      tail_.push_back(e.v);
      head_.push_back(e.u);
    }
  }

  int size() const noexcept { return static_cast<int>(tail_.size()); }
  Vertex tail(int d) const { return tail_.at(static_cast<std::size_t>(d)); }
  Vertex head(int d) const { return head_.at(static_cast<std::size_t>(d)); }
  static constexpr int reverse(int d) noexcept { return d ^ 1; }
  static constexpr int undirected(int d) noexcept { return d >> 1; }

  /// Directed index of (from -> to) given the undirected edge id.
  int directed(const Graph& g, Vertex from, Vertex to) const {
    auto id = g.edge_id(from, to);
    if (!id) detail::fail(ErrorKind::invalid_argument, "directed edge not in graph");
    return 2 * *id + (from < to ? 0 : 1);
  }

 private:
  std::vector<Vertex> tail_;
  std::vector<Vertex> head_;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// Connected-component label per vertex, labels dense from 0 in order of
/// the smallest vertex of each component.
struct Components {
  std::vector<int> label;
  int count = 0;
};

inline Components connected_components(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    int a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Components c;
  c.label.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  for (int v = 0; v < n; ++v) {
    int r = find(v);
    if (root_label[r] < 0) root_label[r] = c.count++;
    c.label[v] = root_label[r];
  }
  return c;
}

namespace detail {

using BoostGraph =
    boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                          boost::property<boost::vertex_index_t, int>,
                          boost::property<boost::edge_index_t, int>>;

inline BoostGraph to_boost(const Graph& g) {
  BoostGraph bg(static_cast<std::size_t>(g.num_vertices()));
  for (const Edge& e : g.edges()) boost::add_edge(e.u, e.v, bg);
  return bg;
}

inline bool boost_planar(const Graph& g, const Edge* extra) {
  BoostGraph bg(static_cast<std::size_t>(g.num_vertices()));
  for (const Edge& e : g.edges()) boost::add_edge(e.u, e.v, bg);
  if (extra) boost::add_edge(extra->u, extra->v, bg);
  return boost::boyer_myrvold_planarity_test(bg);
}

inline bool exceeds_euler_bound(int n, int m) { return n >= 3 && m > 3 * n - 6; }

}  // namespace detail

/// Planarity test (Boyer-Myrvold edge addition, linear time).
inline bool is_planar(const Graph& g) {
  if (detail::exceeds_euler_bound(g.num_vertices(), g.num_edges())) return false;
  if (g.num_edges() < 9) return true;  // K5 and K3,3 have 10 and 9 edges
  return detail::boost_planar(g, nullptr);
}

/// is_planar(g + {a, b}) without copying g; {a, b} must not be an edge.
inline bool is_planar_with(const Graph& g, Vertex a, Vertex b) {
  const int m = g.num_edges() + 1;
  if (detail::exceeds_euler_bound(g.num_vertices(), m)) return false;
  if (m < 9) return true;
  const Edge extra(a, b);
  return detail::boost_planar(g, &extra);
}

inline Graph complete_graph(int n) {
  Graph g(n);
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

/// rows x cols grid with vertex r * cols + c; horizontal edges first.
inline Graph grid_graph(int rows, int cols) {
  Graph g(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c + 1 < cols; ++c) g.add_edge(r * cols + c, r * cols + c + 1);
  for (int r = 0; r + 1 < rows; ++r)
    for (int c = 0; c < cols; ++c) g.add_edge(r * cols + c, (r + 1) * cols + c);
  return g;
}

}  // namespace planar_ising
