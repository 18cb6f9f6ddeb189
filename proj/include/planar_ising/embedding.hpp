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
#include <cmath>
#include <cstddef>
#include <iterator>
#include <numbers>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/chrobak_payne_drawing.hpp>
#include <boost/graph/make_biconnected_planar.hpp>
#include <boost/graph/make_maximal_planar.hpp>
#include <boost/graph/planar_canonical_ordering.hpp>
#include <boost/property_map/property_map.hpp>

#include "planar_ising/error.hpp"
#include "planar_ising/graph.hpp"

namespace planar_ising {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Straight-line drawing of a graph plus the counterclockwise rotation of
/// neighbors around every vertex. The rotation is derived from the
/// coordinates; the constructor does not check for crossings.
class PlanarEmbedding {
 public:
  PlanarEmbedding(Graph g, std::vector<Point> coords)
      : graph_(std::move(g)), coords_(std::move(coords)) {
    if (static_cast<int>(coords_.size()) != graph_.num_vertices())
      detail::fail(ErrorKind::invalid_argument,
                   "embedding: one coordinate pair per vertex required");
    for (const Point& p : coords_)
      if (!std::isfinite(p.x) || !std::isfinite(p.y))
        detail::fail(ErrorKind::invalid_argument, "embedding: non-finite coordinate");
    std::vector<std::pair<double, double>> sorted;
    sorted.reserve(coords_.size());
    for (const Point& p : coords_) sorted.emplace_back(p.x, p.y);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      detail::fail(ErrorKind::invalid_argument, "embedding: two vertices share coordinates");

    rotation_ = graph_.adjacency();
    for (Vertex v = 0; v < graph_.num_vertices(); ++v) {
      auto& nbrs = rotation_[v];
      std::sort(nbrs.begin(), nbrs.end(), [&](Vertex a, Vertex b) {
        return direction_angle(v, a) < direction_angle(v, b);
      });
    }
  }

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<Point>& coords() const noexcept { return coords_; }
  const Point& coord(Vertex v) const { return coords_.at(static_cast<std::size_t>(v)); }

  /// Neighbors of v in counterclockwise order of their direction from v.
  const std::vector<Vertex>& rotation(Vertex v) const {
    return rotation_.at(static_cast<std::size_t>(v));
  }

  double direction_angle(Vertex from, Vertex to) const {
    return std::atan2(coords_[to].y - coords_[from].y, coords_[to].x - coords_[from].x);
  }

 private:
  Graph graph_;
  std::vector<Point> coords_;
  std::vector<std::vector<Vertex>> rotation_;
};

/// Signed angle in (-pi, pi] turning the direction of (i -> j) onto the
/// direction of (j -> l); counterclockwise positive, reversal maps to +pi.
inline double turning_angle(const PlanarEmbedding& emb, Vertex i, Vertex j, Vertex l) {
  const Graph& g = emb.graph();
  if (!g.has_edge(i, j) || !g.has_edge(j, l))
    detail::fail(ErrorKind::invalid_argument, "turning_angle: edge missing from embedded graph");
  const Point& pi = emb.coord(i);
  const Point& pj = emb.coord(j);
  const Point& pl = emb.coord(l);
  const double ax = pj.x - pi.x, ay = pj.y - pi.y;
  const double bx = pl.x - pj.x, by = pl.y - pj.y;
  const double cross = ax * by - ay * bx;
  const double dot = ax * bx + ay * by;
  if (cross == 0.0 && dot < 0.0) return std::numbers::pi;
  return std::atan2(cross, dot);
}

/// Boundary walks of all faces, as sequences of vertices. Each walk follows
/// (u -> v) by (v -> w) where w is the neighbor just clockwise of u around
/// v; every directed edge appears in exactly one walk.
inline std::vector<std::vector<Vertex>> face_walks(const PlanarEmbedding& emb) {
  const Graph& g = emb.graph();
  const DirectedEdgeIndex index(g);
  std::vector<char> used(static_cast<std::size_t>(index.size()), 0);
  std::vector<std::vector<Vertex>> faces;
  for (int start = 0; start < index.size(); ++start) {
    if (used[start]) continue;
    std::vector<Vertex> walk;
    int d = start;
    while (!used[d]) {
      used[d] = 1;
      const Vertex u = index.tail(d), v = index.head(d);
      walk.push_back(u);
      const auto& rot = emb.rotation(v);
      const auto it = std::find(rot.begin(), rot.end(), u);
      const std::size_t pos = static_cast<std::size_t>(it - rot.begin());
      const Vertex w = rot[(pos + rot.size() - 1) % rot.size()];
      d = index.directed(g, v, w);
    }
    faces.push_back(std::move(walk));
  }
  return faces;
}

namespace detail {

struct GridCoord {
  std::size_t x;
  std::size_t y;
};

using BoostEdge = boost::graph_traits<BoostGraph>::edge_descriptor;
using BoostRotation = std::vector<std::vector<BoostEdge>>;

inline void reindex_edges(BoostGraph& bg) {
  auto index = boost::get(boost::edge_index, bg);
  int count = 0;
  boost::graph_traits<BoostGraph>::edge_iterator ei, ei_end;
  for (boost::tie(ei, ei_end) = boost::edges(bg); ei != ei_end; ++ei)
    boost::put(index, *ei, count++);
}

inline void planar_embed_boost(BoostGraph& bg, BoostRotation& rotation) {
  reindex_edges(bg);
  rotation.assign(boost::num_vertices(bg), {});
  if (!boost::boyer_myrvold_planarity_test(
          boost::boyer_myrvold_params::graph = bg,
          boost::boyer_myrvold_params::embedding = &rotation[0]))
    fail(ErrorKind::not_planar, "straight_line_embed: graph is not planar");
}

/// Chrobak-Payne drawing of one connected component with at least three
/// vertices, on the integer grid [0, 2k-4] x [0, k-2].
inline std::vector<GridCoord> draw_component(int k, const std::vector<Edge>& local_edges) {
  BoostGraph bg(static_cast<std::size_t>(k));
  for (const Edge& e : local_edges) boost::add_edge(e.u, e.v, bg);

  BoostRotation rotation;
  planar_embed_boost(bg, rotation);
  boost::make_biconnected_planar(bg, &rotation[0]);
  planar_embed_boost(bg, rotation);
  boost::make_maximal_planar(bg, &rotation[0]);
  planar_embed_boost(bg, rotation);

  std::vector<boost::graph_traits<BoostGraph>::vertex_descriptor> ordering;
  boost::planar_canonical_ordering(bg, &rotation[0], std::back_inserter(ordering));

  std::vector<GridCoord> storage(static_cast<std::size_t>(k));
  boost::iterator_property_map<std::vector<GridCoord>::iterator,
                               boost::property_map<BoostGraph, boost::vertex_index_t>::type>
      drawing(storage.begin(), boost::get(boost::vertex_index, bg));
  boost::chrobak_payne_straight_line_drawing(bg, rotation, ordering.begin(), ordering.end(),
                                             drawing);
  return storage;
}

/// Rotation system of a growing planar graph with every dart labelled by its
/// face. An edge is added only where the embedding already allows it: both
/// ends on a common face, or in different components. That is sufficient for
/// planarity, so no planarity test is needed per pair.
class FacePacker {
 public:
  explicit FacePacker(const Graph& g) : n_(g.num_vertices()), rot_(static_cast<std::size_t>(n_)), uf_(n_) {
    BoostGraph bg = to_boost(g);
    BoostRotation rotation;
    planar_embed_boost(bg, rotation);
    for (Vertex v = 0; v < n_; ++v)
      for (const auto& e : rotation[v]) {
        const auto a = static_cast<Vertex>(boost::source(e, bg));
        const auto b = static_cast<Vertex>(boost::target(e, bg));
        rot_[v].push_back(a == v ? b : a);
      }
    for (const Edge& e : g.edges()) uf_.unite(e.u, e.v);
    for (Vertex a = 0; a < n_; ++a)
      for (Vertex b : rot_[a])
        if (!face_.count(key(a, b))) label_face(a, b, next_face_++);
  }

  /// True if {u, v} can be drawn into the current embedding.
  bool can_add(Vertex u, Vertex v) const {
    std::size_t at_u = 0, at_v = 0;
    return uf_.find(u) != uf_.find(v) || common_face(u, v, at_u, at_v);
  }

  bool try_add(Vertex u, Vertex v) {
    std::size_t at_u = 0, at_v = 0;  // insert before these rotation slots
    if (uf_.find(u) != uf_.find(v)) {
      uf_.unite(u, v);
    } else if (!common_face(u, v, at_u, at_v)) {
      return false;
    }
    rot_[u].insert(rot_[u].begin() + static_cast<std::ptrdiff_t>(at_u), v);
    rot_[v].insert(rot_[v].begin() + static_cast<std::ptrdiff_t>(at_v), u);
    const int split = next_face_++;
    label_face(u, v, split);
    const auto back = face_.find(key(v, u));
    if (back == face_.end() || back->second != split) label_face(v, u, next_face_++);
    return true;
  }

 private:
  long long key(Vertex a, Vertex b) const { return static_cast<long long>(a) * n_ + b; }

  Vertex succ(Vertex at, Vertex from) const {
    const auto& r = rot_[at];
    const std::size_t k = static_cast<std::size_t>(std::find(r.begin(), r.end(), from) - r.begin());
    return r[(k + 1) % r.size()];
  }

  // Face walk: the dart after a -> b is b -> succ_b(a).
  void label_face(Vertex a, Vertex b, int id) {
    const Vertex a0 = a, b0 = b;
    do {
      face_[key(a, b)] = id;
      const Vertex c = succ(b, a);
      a = b;
      b = c;
    } while (a != a0 || b != b0);
  }

  bool common_face(Vertex u, Vertex v, std::size_t& at_u, std::size_t& at_v) const {
    for (std::size_t i = 0; i < rot_[u].size(); ++i) {
      const int f = face_.at(key(u, rot_[u][i]));
      for (std::size_t j = 0; j < rot_[v].size(); ++j) {
        if (face_.at(key(v, rot_[v][j])) == f) {
          at_u = i;
          at_v = j;
          return true;
        }
      }
    }
    return false;
  }

  int n_;
  std::vector<std::vector<Vertex>> rot_;
  std::unordered_map<long long, int> face_;
  int next_face_ = 0;
  mutable UnionFind uf_;
};

}  // namespace detail

/// Pairs from `pool` (non-edges of g) whose addition keeps g planar, in pool
/// order. Pairs that fit into one fixed embedding of g are accepted directly;
/// the rest get a planarity test on g + ij. Planarity is monotone under edge
/// deletion, so the candidates of g + e can be found by filtering those of g.
inline std::vector<Edge> planar_candidates(const Graph& g, const std::vector<Edge>& pool) {
  if (!is_planar(g))
    detail::fail(ErrorKind::not_planar,
                 "planar_candidates: current graph is not planar (invalid learner state)");
  const detail::FacePacker faces(g);
  std::vector<Edge> out;
  for (const Edge& e : pool) {
    if (g.has_edge(e.u, e.v)) continue;
    if (faces.can_add(e.u, e.v) || is_planar_with(g, e.u, e.v)) out.push_back(e);
  }
  return out;
}

/// All non-edges {i, j} such that g + ij stays planar, in lexicographic order.
inline std::vector<Edge> planar_candidates(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<Edge> pool;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) pool.emplace_back(i, j);
  return planar_candidates(g, pool);
}

/// Straight-line planar drawing. Each connected component is triangulated,
/// drawn with a canonical-ordering shift algorithm, and stripped back to its
/// own edges. Components go into disjoint horizontal bands; isolated
/// vertices sit on a row above all bands.
inline PlanarEmbedding straight_line_embed(const Graph& g) {
  if (!is_planar(g))
    detail::fail(ErrorKind::not_planar, "straight_line_embed: graph is not planar");

  const int n = g.num_vertices();
  const Components comp = connected_components(g);
  std::vector<std::vector<Vertex>> members(static_cast<std::size_t>(comp.count));
  for (Vertex v = 0; v < n; ++v) members[comp.label[v]].push_back(v);

  std::vector<int> local(static_cast<std::size_t>(n), -1);
  for (const auto& m : members)
    for (std::size_t i = 0; i < m.size(); ++i) local[m[i]] = static_cast<int>(i);
  std::vector<std::vector<Edge>> comp_edges(static_cast<std::size_t>(comp.count));
  for (const Edge& e : g.edges())
    comp_edges[comp.label[e.u]].emplace_back(local[e.u], local[e.v]);

  std::vector<Point> coords(static_cast<std::size_t>(n));
  double band = 0.0;
  std::vector<Vertex> isolated;
  for (int c = 0; c < comp.count; ++c) {
    const auto& m = members[c];
    const int k = static_cast<int>(m.size());
    if (k == 1) {
      isolated.push_back(m[0]);
      continue;
    }
    if (k == 2) {
      coords[m[0]] = {0.0, band};
      coords[m[1]] = {1.0, band};
      band += 2.0;
      continue;
    }
    const auto grid = detail::draw_component(k, comp_edges[c]);
    double height = 0.0;
    for (int i = 0; i < k; ++i) {
      coords[m[i]] = {static_cast<double>(grid[i].x), static_cast<double>(grid[i].y) + band};
      height = std::max(height, static_cast<double>(grid[i].y));
    }
    band += height + 2.0;
  }
  for (std::size_t i = 0; i < isolated.size(); ++i)
    coords[isolated[i]] = {static_cast<double>(i), band};

  return PlanarEmbedding(g, std::move(coords));
}

}  // namespace planar_ising
