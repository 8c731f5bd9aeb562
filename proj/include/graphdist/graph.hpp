#pragma once

// Straight-line embedded graphs: validation, connectivity, planarity of the
// given embedding, face tracing, peeling of pendant trees and the recursive
// chord decomposition of the remaining core.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphdist/error.hpp"
#include "graphdist/geometry.hpp"

namespace graphdist {

using VertexId = std::int64_t;

struct RawVertex {
  VertexId id = 0;
  double x = 0.0;
  double y = 0.0;
};

/// Unvalidated graph data as read from a file.
struct RawGraph {
  std::vector<RawVertex> vertices;
  std::vector<std::pair<VertexId, VertexId>> edges;
};

/// Immutable embedded graph. Vertices and edges are addressed by dense
/// indices in input order; every edge is stored with the lower-id vertex
/// first, which fixes the orientation of edge parameters.
class EmbeddedGraph {
 public:
  struct Vertex {
    VertexId id = 0;
    Point2 pos;
  };
  struct Edge {
    std::size_t u = 0;
    std::size_t v = 0;
  };
  struct Incidence {
    std::size_t neighbor = 0;
    std::size_t edge = 0;
  };

  EmbeddedGraph() = default;

  static EmbeddedGraph validate(const RawGraph& raw) {
    EmbeddedGraph g;
    g.vertices_.reserve(raw.vertices.size());
    for (const RawVertex& rv : raw.vertices) {
      const Point2 p{rv.x, rv.y};
      if (!is_finite(p)) {
        throw Error(ErrorCode::kNonFinite, "vertex " + std::to_string(rv.id) + " has a non-finite coordinate");
      }
      if (!g.index_.emplace(rv.id, g.vertices_.size()).second) {
        throw Error(ErrorCode::kDuplicateId, "vertex id " + std::to_string(rv.id) + " appears twice");
      }
      g.vertices_.push_back({rv.id, p});
    }
    g.adjacency_.resize(g.vertices_.size());
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [ida, idb] : raw.edges) {
      auto ia = g.index_of(ida);
      auto ib = g.index_of(idb);
      if (!ia || !ib) {
        throw Error(ErrorCode::kUnknownVertex,
                    "edge (" + std::to_string(ida) + "," + std::to_string(idb) + ") references an unknown vertex");
      }
      if (*ia == *ib) throw Error(ErrorCode::kSelfLoop, "self-loop at vertex " + std::to_string(ida));
      std::size_t u = *ia, v = *ib;
      if (g.vertices_[u].id > g.vertices_[v].id) std::swap(u, v);
      if (g.vertices_[u].pos == g.vertices_[v].pos) {
        throw Error(ErrorCode::kDegenerateEdge,
                    "edge (" + std::to_string(ida) + "," + std::to_string(idb) + ") has coincident endpoints");
      }
      if (!seen.emplace(u, v).second) {
        throw Error(ErrorCode::kDuplicateEdge,
                    "edge (" + std::to_string(ida) + "," + std::to_string(idb) + ") appears twice");
      }
      const std::size_t e = g.edges_.size();
      g.edges_.push_back({u, v});
      g.adjacency_[u].push_back({v, e});
      g.adjacency_[v].push_back({u, e});
    }
    return g;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return vertices_.empty(); }

  const Vertex& vertex(std::size_t i) const { return vertices_[i]; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  VertexId id(std::size_t i) const { return vertices_[i].id; }
  Point2 position(std::size_t i) const { return vertices_[i].pos; }
  Segment segment(std::size_t e) const { return {vertices_[edges_[e].u].pos, vertices_[edges_[e].v].pos}; }
  const std::vector<Incidence>& neighbors(std::size_t i) const { return adjacency_[i]; }
  std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }

  std::optional<std::size_t> index_of(VertexId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> find_edge(std::size_t a, std::size_t b) const {
    for (const Incidence& inc : adjacency_[a]) {
      if (inc.neighbor == b) return inc.edge;
    }
    return std::nullopt;
  }

  /// The endpoint of e that is not `from`.
  std::size_t other(std::size_t e, std::size_t from) const {
    return edges_[e].u == from ? edges_[e].v : edges_[e].u;
  }

  RawGraph to_raw() const {
    RawGraph raw;
    for (const Vertex& v : vertices_) raw.vertices.push_back({v.id, v.pos.x, v.pos.y});
    for (const Edge& e : edges_) raw.edges.emplace_back(vertices_[e.u].id, vertices_[e.v].id);
    return raw;
  }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::unordered_map<VertexId, std::size_t> index_;
};

/// A subgraph together with the indices of its elements in the parent.
struct SubGraph {
  EmbeddedGraph graph;
  std::vector<std::size_t> vertex_parent;
  std::vector<std::size_t> edge_parent;
};

/// Subgraph made of the given parent vertices and every parent edge with
/// both endpoints among them (when `edges` is empty) or exactly `edges`.
inline SubGraph make_subgraph(const EmbeddedGraph& g, const std::vector<std::size_t>& vertices,
                              const std::optional<std::vector<std::size_t>>& edges = std::nullopt) {
  SubGraph sub;
  std::vector<bool> keep(g.vertex_count(), false);
  std::vector<std::size_t> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  RawGraph raw;
  for (std::size_t v : sorted) {
    keep[v] = true;
    raw.vertices.push_back({g.id(v), g.position(v).x, g.position(v).y});
    sub.vertex_parent.push_back(v);
  }
  std::vector<std::size_t> edge_list;
  if (edges) {
    edge_list = *edges;
    std::sort(edge_list.begin(), edge_list.end());
  } else {
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      if (keep[g.edge(e).u] && keep[g.edge(e).v]) edge_list.push_back(e);
    }
  }
  for (std::size_t e : edge_list) {
    raw.edges.emplace_back(g.id(g.edge(e).u), g.id(g.edge(e).v));
    sub.edge_parent.push_back(e);
  }
  sub.graph = EmbeddedGraph::validate(raw);
  return sub;
}

/// Vertex index lists, one per connected component, ordered by their
/// smallest index.
inline std::vector<std::vector<std::size_t>> component_vertex_indices(const EmbeddedGraph& g) {
  std::vector<std::vector<std::size_t>> comps;
  std::vector<bool> seen(g.vertex_count(), false);
  for (std::size_t s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto& inc : g.neighbors(v)) {
        if (!seen[inc.neighbor]) {
          seen[inc.neighbor] = true;
          stack.push_back(inc.neighbor);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

/// Partition of the vertex ids by connectivity; each set is sorted.
inline std::vector<std::vector<VertexId>> connected_components(const EmbeddedGraph& g) {
  std::vector<std::vector<VertexId>> out;
  for (const auto& comp : component_vertex_indices(g)) {
    std::vector<VertexId> ids;
    for (std::size_t v : comp) ids.push_back(g.id(v));
    std::sort(ids.begin(), ids.end());
    out.push_back(std::move(ids));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_connected(const EmbeddedGraph& g) { return component_vertex_indices(g).size() == 1; }

inline bool is_tree(const EmbeddedGraph& g) { return is_connected(g) && g.edge_count() + 1 == g.vertex_count(); }

/// True iff no two edges share a point other than a common endpoint.
inline bool is_plane(const EmbeddedGraph& g, Tolerance tol = kDefaultTolerance) {
  const std::size_t m = g.edge_count();
  for (std::size_t i = 0; i < m; ++i) {
    const Segment si = g.segment(i);
    for (std::size_t j = i + 1; j < m; ++j) {
      const Segment sj = g.segment(j);
      const auto& ei = g.edge(i);
      const auto& ej = g.edge(j);
      std::optional<std::size_t> shared;
      if (ei.u == ej.u || ei.u == ej.v) shared = ei.u;
      if (ei.v == ej.u || ei.v == ej.v) shared = ei.v;
      if (!shared) {
        if (segments_intersect(si, sj, tol.eps_geom)) return false;
        continue;
      }
      // Edges meeting at a common endpoint may only overlap if collinear in
      // the same direction; a far endpoint lying on the other edge detects it.
      const std::size_t fi = g.other(i, *shared);
      const std::size_t fj = g.other(j, *shared);
      if (point_segment_distance(g.position(fi), sj) <= tol.eps_geom) return false;
      if (point_segment_distance(g.position(fj), si) <= tol.eps_geom) return false;
    }
  }
  return true;
}

/// Directed edge index: 2*e for u->v, 2*e+1 for v->u.
struct Dart {
  static std::size_t make(std::size_t edge, bool reversed) { return 2 * edge + (reversed ? 1 : 0); }
  static std::size_t edge(std::size_t dart) { return dart / 2; }
  static bool reversed(std::size_t dart) { return dart % 2 == 1; }
};

struct Face {
  std::vector<std::size_t> darts;     // boundary walk, face on the left
  std::vector<std::size_t> vertices;  // tail vertex of each dart
  double signed_area = 0.0;
};

struct FaceSet {
  std::vector<Face> faces;
  std::size_t outer_face_index = 0;
  std::vector<std::size_t> face_of_dart;

  std::size_t bounded_count() const { return faces.empty() ? 0 : faces.size() - 1; }
};

namespace detail {

inline std::size_t dart_tail(const EmbeddedGraph& g, std::size_t dart) {
  const auto& e = g.edge(Dart::edge(dart));
  return Dart::reversed(dart) ? e.v : e.u;
}

inline std::size_t dart_head(const EmbeddedGraph& g, std::size_t dart) {
  const auto& e = g.edge(Dart::edge(dart));
  return Dart::reversed(dart) ? e.u : e.v;
}

inline std::size_t dart_from(const EmbeddedGraph& g, std::size_t edge, std::size_t tail) {
  return Dart::make(edge, g.edge(edge).u != tail);
}

// Incident edges of every vertex sorted counter-clockwise by angle; ties by
// neighbor id.
inline std::vector<std::vector<EmbeddedGraph::Incidence>> rotation_system(const EmbeddedGraph& g) {
  std::vector<std::vector<EmbeddedGraph::Incidence>> rot(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    rot[v] = g.neighbors(v);
    const Point2 pv = g.position(v);
    std::sort(rot[v].begin(), rot[v].end(), [&](const auto& a, const auto& b) {
      const Point2 da = g.position(a.neighbor) - pv;
      const Point2 db = g.position(b.neighbor) - pv;
      const double aa = std::atan2(da.y, da.x);
      const double ab = std::atan2(db.y, db.x);
      if (aa != ab) return aa < ab;
      return g.id(a.neighbor) < g.id(b.neighbor);
    });
  }
  return rot;
}

}  // namespace detail

/// Faces of a connected plane graph traced through the rotation system.
inline FaceSet faces(const EmbeddedGraph& g, Tolerance tol = kDefaultTolerance) {
  if (g.empty() || !is_connected(g)) throw Error(ErrorCode::kNotConnected, "face tracing needs a connected graph");
  if (!is_plane(g, tol)) throw Error(ErrorCode::kNotPlane, "face tracing needs a crossing-free embedding");

  FaceSet fs;
  if (g.edge_count() == 0) {
    Face f;
    f.vertices.push_back(0);
    fs.faces.push_back(std::move(f));
    return fs;
  }
  const auto rot = detail::rotation_system(g);
  // Position of each dart's reverse in the rotation of its head.
  std::vector<std::size_t> pos_in_rot(2 * g.edge_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t k = 0; k < rot[v].size(); ++k) {
      pos_in_rot[detail::dart_from(g, rot[v][k].edge, v)] = k;
    }
  }
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  fs.face_of_dart.assign(2 * g.edge_count(), kNone);
  for (std::size_t start = 0; start < 2 * g.edge_count(); ++start) {
    if (fs.face_of_dart[start] != kNone) continue;
    Face f;
    std::size_t d = start;
    do {
      fs.face_of_dart[d] = fs.faces.size();
      f.darts.push_back(d);
      const std::size_t tail = detail::dart_tail(g, d);
      const std::size_t head = detail::dart_head(g, d);
      f.vertices.push_back(tail);
      f.signed_area += 0.5 * cross(g.position(tail), g.position(head));
      // Next dart leaves `head` towards the clockwise neighbor of `tail`.
      const std::size_t back = Dart::make(Dart::edge(d), !Dart::reversed(d));
      const std::size_t k = pos_in_rot[back];
      const std::size_t deg = rot[head].size();
      const auto& nxt = rot[head][(k + deg - 1) % deg];
      d = detail::dart_from(g, nxt.edge, head);
    } while (d != start);
    fs.faces.push_back(std::move(f));
  }
  std::size_t outer = 0;
  for (std::size_t i = 1; i < fs.faces.size(); ++i) {
    if (fs.faces[i].signed_area < fs.faces[outer].signed_area) outer = i;
  }
  fs.outer_face_index = outer;
  return fs;
}

struct PeeledTree {
  VertexId root = 0;
  SubGraph tree;  // indices refer to the peeled graph
};

struct PeelResult {
  SubGraph core;
  std::vector<PeeledTree> trees;
};

/// Repeatedly strips degree-one vertices. The stripped forest is grouped by
/// the core vertex it hangs from; a component that is a tree keeps its last
/// vertex as a coreless root.
inline PeelResult peel_tree_substructures(const EmbeddedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> deg(n);
  std::vector<bool> vertex_removed(n, false), edge_removed(g.edge_count(), false);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] == 1) queue.push_back(v);
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (vertex_removed[v] || deg[v] != 1) continue;
    vertex_removed[v] = true;
    for (const auto& inc : g.neighbors(v)) {
      if (edge_removed[inc.edge]) continue;
      edge_removed[inc.edge] = true;
      deg[v] = 0;
      if (--deg[inc.neighbor] == 1) queue.push_back(inc.neighbor);
    }
  }

  PeelResult result;
  std::vector<std::size_t> core_vertices, core_edges;
  for (std::size_t v = 0; v < n; ++v) {
    if (!vertex_removed[v]) core_vertices.push_back(v);
  }
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (!edge_removed[e]) core_edges.push_back(e);
  }
  result.core = make_subgraph(g, core_vertices, core_edges);

  // Components of the removed edges; each touches exactly one kept vertex.
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (edge_removed[e]) parent[find(g.edge(e).u)] = find(g.edge(e).v);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (edge_removed[e]) groups[find(g.edge(e).u)].push_back(e);
  }
  for (auto& [rep, edges] : groups) {
    std::vector<std::size_t> verts;
    std::optional<std::size_t> root;
    for (std::size_t e : edges) {
      for (std::size_t x : {g.edge(e).u, g.edge(e).v}) {
        verts.push_back(x);
        if (!vertex_removed[x]) root = x;
      }
    }
    PeeledTree t;
    t.root = g.id(*root);
    t.tree = make_subgraph(g, verts, edges);
    result.trees.push_back(std::move(t));
  }
  std::sort(result.trees.begin(), result.trees.end(),
            [](const PeeledTree& a, const PeeledTree& b) { return a.root < b.root; });
  return result;
}

/// Binary decomposition of the bounded faces of a core graph. Leaves are the
/// face boundary walks; an internal node separates its two children along
/// a chord, the vertex path shared by both sides.
struct DecompositionTree {
  struct Node {
    bool leaf = true;
    std::size_t face = 0;                 // leaf: face index into `faces`
    std::vector<std::size_t> cycle;       // leaf: boundary walk (vertex indices)
    std::size_t left = 0, right = 0;      // internal: children
    std::vector<std::size_t> chord;       // internal: shared vertices, path order when the chord is a path
    std::vector<std::size_t> face_list;   // bounded faces below this node
  };
  std::vector<Node> nodes;
  std::size_t root = 0;
  FaceSet faces;
  std::vector<std::size_t> bridge_edges;  // core edges not on any bounded face

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.leaf; }));
  }
  std::size_t depth(std::size_t node) const {
    const Node& n = nodes[node];
    return n.leaf ? 0 : 1 + std::max(depth(n.left), depth(n.right));
  }
};

namespace detail {

struct RegionSplit {
  std::vector<std::size_t> left, right;
  std::vector<std::size_t> chord;
};

class ChordSplitter {
 public:
  ChordSplitter(const EmbeddedGraph& g, const FaceSet& fs) : g_(g), fs_(fs) {}

  RegionSplit split(const std::vector<std::size_t>& region) const {
    std::vector<bool> in_region(fs_.faces.size(), false);
    for (std::size_t f : region) in_region[f] = true;
    auto face_l = [&](std::size_t e) { return fs_.face_of_dart[Dart::make(e, false)]; };
    auto face_r = [&](std::size_t e) { return fs_.face_of_dart[Dart::make(e, true)]; };

    std::vector<bool> interior(g_.edge_count(), false);
    std::vector<std::size_t> region_degree(g_.vertex_count(), 0);
    for (std::size_t e = 0; e < g_.edge_count(); ++e) {
      const bool l = in_region[face_l(e)], r = in_region[face_r(e)];
      if (l || r) {
        ++region_degree[g_.edge(e).u];
        ++region_degree[g_.edge(e).v];
      }
      interior[e] = l && r && face_l(e) != face_r(e);
    }

    std::optional<RegionSplit> best;
    std::size_t best_imbalance = std::numeric_limits<std::size_t>::max();
    std::vector<VertexId> best_ids;
    std::vector<bool> used(g_.edge_count(), false);
    for (std::size_t e0 = 0; e0 < g_.edge_count(); ++e0) {
      if (!interior[e0] || used[e0]) continue;
      auto [path, chord_edges] = trace_chord(e0, interior, region_degree);
      for (std::size_t ce : chord_edges) used[ce] = true;
      std::vector<bool> blocked(g_.edge_count(), false);
      for (std::size_t ce : chord_edges) blocked[ce] = true;
      auto comps = dual_components(region, interior, blocked);
      if (comps.size() != 2) continue;
      const std::size_t imbalance =
          comps[0].size() > comps[1].size() ? comps[0].size() - comps[1].size() : comps[1].size() - comps[0].size();
      std::vector<VertexId> ids;
      for (std::size_t v : path) ids.push_back(g_.id(v));
      if (ids.back() < ids.front()) {
        std::reverse(ids.begin(), ids.end());
        std::reverse(path.begin(), path.end());
      }
      if (imbalance < best_imbalance || (imbalance == best_imbalance && ids < best_ids)) {
        best_imbalance = imbalance;
        best_ids = ids;
        best = RegionSplit{comps[0], comps[1], path};
      }
    }
    if (best) return *best;

    // No single chord separates the region: fall back to a balanced split of
    // the dual graph and record the shared vertices.
    RegionSplit s;
    const std::vector<bool> none(g_.edge_count(), false);
    auto comps = dual_components(region, interior, none);
    if (comps.size() > 1) {
      std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a.front() < b.front();
      });
      for (auto& c : comps) {
        auto& dst = s.left.size() <= s.right.size() ? s.left : s.right;
        dst.insert(dst.end(), c.begin(), c.end());
      }
    } else {
      s.left = bfs_prefix(region, interior, region.size() / 2);
      std::vector<bool> in_left(fs_.faces.size(), false);
      for (std::size_t f : s.left) in_left[f] = true;
      for (std::size_t f : region) {
        if (!in_left[f]) s.right.push_back(f);
      }
    }
    std::sort(s.left.begin(), s.left.end());
    std::sort(s.right.begin(), s.right.end());
    s.chord = shared_vertices(s.left, s.right);
    return s;
  }

 private:
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> trace_chord(
      std::size_t e0, const std::vector<bool>& interior, const std::vector<std::size_t>& region_degree) const {
    std::deque<std::size_t> path{g_.edge(e0).u, g_.edge(e0).v};
    std::vector<std::size_t> edges{e0};
    std::set<std::size_t> on_path{g_.edge(e0).u, g_.edge(e0).v};
    auto extend = [&](bool front) {
      while (true) {
        const std::size_t end = front ? path.front() : path.back();
        const std::size_t prev_edge = front ? edges.front() : edges.back();
        if (region_degree[end] != 2) return;
        std::optional<std::size_t> next_edge;
        for (const auto& inc : g_.neighbors(end)) {
          if (inc.edge != prev_edge && interior[inc.edge]) next_edge = inc.edge;
        }
        if (!next_edge) return;
        const std::size_t nxt = g_.other(*next_edge, end);
        if (on_path.count(nxt)) return;
        on_path.insert(nxt);
        if (front) {
          path.push_front(nxt);
          edges.insert(edges.begin(), *next_edge);
        } else {
          path.push_back(nxt);
          edges.push_back(*next_edge);
        }
      }
    };
    extend(false);
    extend(true);
    return {std::vector<std::size_t>(path.begin(), path.end()), edges};
  }

  std::vector<std::vector<std::size_t>> dual_components(const std::vector<std::size_t>& region,
                                                        const std::vector<bool>& interior,
                                                        const std::vector<bool>& blocked) const {
    std::map<std::size_t, std::size_t> parent;
    for (std::size_t f : region) parent[f] = f;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t e = 0; e < g_.edge_count(); ++e) {
      if (!interior[e] || blocked[e]) continue;
      const std::size_t a = fs_.face_of_dart[Dart::make(e, false)];
      const std::size_t b = fs_.face_of_dart[Dart::make(e, true)];
      parent[find(a)] = find(b);
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t f : region) groups[find(f)].push_back(f);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [r, fsx] : groups) {
      std::sort(fsx.begin(), fsx.end());
      out.push_back(fsx);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::size_t> bfs_prefix(const std::vector<std::size_t>& region, const std::vector<bool>& interior,
                                      std::size_t count) const {
    std::map<std::size_t, std::set<std::size_t>> adj;
    for (std::size_t e = 0; e < g_.edge_count(); ++e) {
      if (!interior[e]) continue;
      const std::size_t a = fs_.face_of_dart[Dart::make(e, false)];
      const std::size_t b = fs_.face_of_dart[Dart::make(e, true)];
      adj[a].insert(b);
      adj[b].insert(a);
    }
    std::vector<std::size_t> out;
    std::set<std::size_t> seen{region.front()};
    std::deque<std::size_t> queue{region.front()};
    while (!queue.empty() && out.size() < count) {
      const std::size_t f = queue.front();
      queue.pop_front();
      out.push_back(f);
      for (std::size_t nb : adj[f]) {
        if (seen.insert(nb).second) queue.push_back(nb);
      }
    }
    return out;
  }

  std::vector<std::size_t> shared_vertices(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) const {
    std::set<std::size_t> va, vb;
    for (std::size_t f : a) va.insert(fs_.faces[f].vertices.begin(), fs_.faces[f].vertices.end());
    for (std::size_t f : b) vb.insert(fs_.faces[f].vertices.begin(), fs_.faces[f].vertices.end());
    std::vector<std::size_t> out;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(out));
    std::sort(out.begin(), out.end(), [&](std::size_t x, std::size_t y) { return g_.id(x) < g_.id(y); });
    return out;
  }

  const EmbeddedGraph& g_;
  const FaceSet& fs_;
};

}  // namespace detail

/// Recursive balanced split of the bounded faces of `core`.
inline DecompositionTree chord_decomposition(const EmbeddedGraph& core, Tolerance tol = kDefaultTolerance) {
  if (!is_plane(core, tol)) throw Error(ErrorCode::kNotPlane, "chord decomposition needs a plane graph");
  for (std::size_t v = 0; v < core.vertex_count(); ++v) {
    if (core.degree(v) < 2) {
      throw Error(ErrorCode::kHasDegreeOne, "vertex " + std::to_string(core.id(v)) + " has degree below two");
    }
  }
  DecompositionTree tree;
  tree.faces = faces(core, tol);
  std::vector<std::size_t> bounded;
  for (std::size_t f = 0; f < tree.faces.faces.size(); ++f) {
    if (f != tree.faces.outer_face_index) bounded.push_back(f);
  }
  for (std::size_t e = 0; e < core.edge_count(); ++e) {
    const std::size_t a = tree.faces.face_of_dart[Dart::make(e, false)];
    const std::size_t b = tree.faces.face_of_dart[Dart::make(e, true)];
    if (a == tree.faces.outer_face_index && b == tree.faces.outer_face_index) tree.bridge_edges.push_back(e);
  }

  detail::ChordSplitter splitter(core, tree.faces);
  std::function<std::size_t(const std::vector<std::size_t>&)> build = [&](const std::vector<std::size_t>& region) {
    DecompositionTree::Node node;
    node.face_list = region;
    if (region.size() == 1) {
      node.leaf = true;
      node.face = region.front();
      node.cycle = tree.faces.faces[node.face].vertices;
      tree.nodes.push_back(std::move(node));
      return tree.nodes.size() - 1;
    }
    detail::RegionSplit s = splitter.split(region);
    node.leaf = false;
    node.chord = s.chord;
    node.left = build(s.left);
    node.right = build(s.right);
    tree.nodes.push_back(std::move(node));
    return tree.nodes.size() - 1;
  };
  tree.root = build(bounded);
  return tree;
}

}  // namespace graphdist
