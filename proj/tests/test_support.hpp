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

// Test-only oracles and generators. Nothing here calls into the planarity
// tester or the embedder, so it can be used to check them.

#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "planar_ising/graph.hpp"
#include "planar_ising/embedding.hpp"
#include "planar_ising/model.hpp"

namespace planar_ising::testing {

inline double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// c lies on the closed segment ab (assumes collinear)
inline bool on_segment(const Point& a, const Point& b, const Point& c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

inline bool segments_touch(const Point& p1, const Point& p2, const Point& p3, const Point& p4) {
  const double d1 = orient(p3, p4, p1), d2 = orient(p3, p4, p2);
  const double d3 = orient(p1, p2, p3), d4 = orient(p1, p2, p4);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(p3, p4, p1)) return true;
  if (d2 == 0 && on_segment(p3, p4, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, p3)) return true;
  if (d4 == 0 && on_segment(p1, p2, p4)) return true;
  return false;
}

/// Number of violations of the straight-line embedding contract, by
/// brute force over all edge pairs and vertex/edge pairs.
inline int count_crossings(const Graph& g, const std::vector<Point>& xy) {
  int bad = 0;
  const auto& edges = g.edges();
  for (std::size_t a = 0; a < edges.size(); ++a) {
    const Edge& e = edges[a];
    for (std::size_t b = a + 1; b < edges.size(); ++b) {
      const Edge& f = edges[b];
      const bool share = e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v;
      if (!share) {
        if (segments_touch(xy[e.u], xy[e.v], xy[f.u], xy[f.v])) ++bad;
        continue;
      }
      // shared endpoint: only overlap along a common line is a violation
      const Vertex common = (e.u == f.u || e.u == f.v) ? e.u : e.v;
      const Vertex x = e.u == common ? e.v : e.u;
      const Vertex y = f.u == common ? f.v : f.u;
      if (orient(xy[common], xy[x], xy[y]) == 0.0) {
        const double dx1 = xy[x].x - xy[common].x, dy1 = xy[x].y - xy[common].y;
        const double dx2 = xy[y].x - xy[common].x, dy2 = xy[y].y - xy[common].y;
        if (dx1 * dx2 + dy1 * dy2 > 0) ++bad;
      }
    }
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (v == e.u || v == e.v) continue;
      if (orient(xy[e.u], xy[e.v], xy[v]) == 0.0 && on_segment(xy[e.u], xy[e.v], xy[v])) ++bad;
    }
  }
  return bad;
}

struct GeometricGraph {
  Graph graph;
  std::vector<Point> coords;
};

/// Random straight-line planar graph: random points, a greedy non-crossing
/// triangulation over shuffled pairs, then random edge deletions that keep
/// the graph connected until `target_edges` remain. With `convex`, points
/// lie on a circle and the result is outer-planar.
inline GeometricGraph random_connected_planar(int n, int target_edges, std::mt19937_64& rng,
                                              bool convex = false) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Point> pts(static_cast<std::size_t>(n));
  for (auto& p : pts) {
    if (convex) {
      const double a = 2.0 * std::numbers::pi * coord(rng);
      p = {std::cos(a), std::sin(a)};
    } else {
      p = {coord(rng), coord(rng)};
    }
  }

  std::vector<Edge> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  // shortest-first keeps the triangulation well shaped and connected
  std::stable_sort(pairs.begin(), pairs.end(), [&](const Edge& a, const Edge& b) {
    auto len = [&](const Edge& e) {
      return std::hypot(pts[e.u].x - pts[e.v].x, pts[e.u].y - pts[e.v].y);
    };
    return len(a) < len(b);
  });
  std::vector<Edge> kept;
  for (const Edge& e : pairs) {
    bool ok = true;
    for (const Edge& f : kept) {
      const bool share = e.u == f.u || e.u == f.v || e.v == f.u || e.v == f.v;
      if (share) continue;
      if (segments_touch(pts[e.u], pts[e.v], pts[f.u], pts[f.v])) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(e);
  }

  std::shuffle(kept.begin(), kept.end(), rng);
  auto connected_without = [&](std::size_t skip) {
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int comps = n;
    for (std::size_t k = 0; k < kept.size(); ++k) {
      if (k == skip) continue;
      int a = find(kept[k].u), b = find(kept[k].v);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
    return comps == 1;
  };
  for (std::size_t k = 0; k < kept.size() && static_cast<int>(kept.size()) > target_edges;) {
    if (connected_without(k))
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(k));
    else
      ++k;
  }
  return {Graph(n, kept), pts};
}

/// Number of rotation systems brute_force_planar may have to visit.
inline double rotation_system_count(const Graph& g) {
  double count = 1.0;
  for (int d : g.degrees())
    for (int k = 2; k < d; ++k) count *= k;
  return count;
}

/// Independent planarity check for small graphs: a connected graph is planar
/// iff some rotation system gives V - E + F = 2. Exponential; keep the
/// product of (deg-1)! small.
inline bool brute_force_planar(const Graph& g) {
  const int n = g.num_vertices();
  const auto comps = connected_components(g);
  for (int c = 0; c < comps.count; ++c) {
    std::vector<int> local(static_cast<std::size_t>(n), -1);
    int k = 0;
    for (int v = 0; v < n; ++v)
      if (comps.label[v] == c) local[v] = k++;
    Graph h(k);
    for (const Edge& e : g.edges())
      if (comps.label[e.u] == c) h.add_edge(local[e.u], local[e.v]);
    if (h.num_edges() < 3) continue;

    auto rot = h.adjacency();
    for (auto& r : rot) std::sort(r.begin() + (r.empty() ? 0 : 1), r.end());
    const DirectedEdgeIndex index(h);
    bool found = false;
    // Odometer over per-vertex permutations that fix the first neighbor.
    while (true) {
      std::vector<char> used(static_cast<std::size_t>(index.size()), 0);
      int faces = 0;
      for (int s = 0; s < index.size(); ++s) {
        if (used[s]) continue;
        ++faces;
        int d = s;
        while (!used[d]) {
          used[d] = 1;
          const Vertex u = index.tail(d), v = index.head(d);
          const auto& r = rot[v];
          const auto pos = static_cast<std::size_t>(std::find(r.begin(), r.end(), u) - r.begin());
          d = index.directed(h, v, r[(pos + 1) % r.size()]);
        }
      }
      if (k - h.num_edges() + faces == 2) {
        found = true;
        break;
      }
      int v = 0;
      for (; v < k; ++v) {
        auto& r = rot[v];
        if (r.size() > 2 && std::next_permutation(r.begin() + 1, r.end())) break;
      }
      if (v == k) break;
    }
    if (!found) return false;
  }
  return true;
}

inline std::vector<double> uniform_vector(std::size_t size, double lo, double hi,
                                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> out(size);
  for (auto& x : out) x = dist(rng);
  return out;
}

}  // namespace planar_ising::testing
