#pragma once

// Vertex placements (connected pieces of G2 inside the ball around a G1
// vertex), weak and strong reachability along every G1 edge, and pruning of
// placements that lack a partner on some incident edge.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "graphdist/error.hpp"
#include "graphdist/frechet.hpp"
#include "graphdist/geometry.hpp"
#include "graphdist/graph.hpp"

namespace graphdist {

enum class Mode { kStrong, kWeak };

inline const char* to_string(Mode m) { return m == Mode::kStrong ? "strong" : "weak"; }

/// A point on G2 given by an edge index and a parameter along the edge's
/// canonical orientation. Points at vertices are normalized to the smallest
/// incident edge with t exactly 0 or 1.
struct PointOnGraph {
  std::size_t edge = 0;
  double t = 0.0;
};

inline PointOnGraph on_vertex(const EmbeddedGraph& g, std::size_t w) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& inc : g.neighbors(w)) best = std::min(best, inc.edge);
  return {best, g.edge(best).u == w ? 0.0 : 1.0};
}

inline PointOnGraph canonical_point(const EmbeddedGraph& g, std::size_t edge, double t) {
  if (t <= 0.0) return on_vertex(g, g.edge(edge).u);
  if (t >= 1.0) return on_vertex(g, g.edge(edge).v);
  return {edge, t};
}

inline std::optional<std::size_t> vertex_at(const EmbeddedGraph& g, const PointOnGraph& p) {
  if (p.t <= 0.0) return g.edge(p.edge).u;
  if (p.t >= 1.0) return g.edge(p.edge).v;
  return std::nullopt;
}

inline Point2 position(const EmbeddedGraph& g, const PointOnGraph& p) { return g.segment(p.edge).at(p.t); }

inline bool same_point(const EmbeddedGraph& g, const PointOnGraph& a, const PointOnGraph& b) {
  const auto va = vertex_at(g, a), vb = vertex_at(g, b);
  if (va || vb) return va == vb;
  return a.edge == b.edge && std::abs(a.t - b.t) <= 1e-12;
}

struct Portion {
  std::size_t edge = 0;
  Interval range;
};

struct VertexPlacement {
  std::size_t owner = 0;  // G1 vertex index
  std::size_t index = 0;  // position in the owner's list
  std::vector<Portion> portions;
  std::vector<std::size_t> touched_vertices;  // G2 vertices inside the ball
  PointOnGraph representative;
  bool alive = true;

  const Portion* portion_on(std::size_t edge) const {
    for (const Portion& p : portions) {
      if (p.edge == edge) return &p;
    }
    return nullptr;
  }
  bool touches(std::size_t w) const {
    return std::find(touched_vertices.begin(), touched_vertices.end(), w) != touched_vertices.end();
  }
};

/// Placements per G1 vertex index.
using PlacementTable = std::vector<std::vector<VertexPlacement>>;

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Point of the portion nearest to c.
inline PointOnGraph nearest_in_portion(const EmbeddedGraph& g2, const Portion& p, Point2 c) {
  const double t = std::clamp(closest_parameter(c, g2.segment(p.edge)), p.range.lo, p.range.hi);
  return canonical_point(g2, p.edge, t);
}

}  // namespace detail

/// Placements of every G1 vertex at radius eps.
inline std::vector<VertexPlacement> placements_of(const EmbeddedGraph& g2, Point2 center, std::size_t owner,
                                                  double eps) {
  const std::size_t n2 = g2.vertex_count();
  std::vector<MaybeInterval> clip(g2.edge_count());
  detail::UnionFind uf(n2 + g2.edge_count());
  for (std::size_t f = 0; f < g2.edge_count(); ++f) {
    clip[f] = clip_segment_to_disk(g2.segment(f), center, eps);
    if (!clip[f]) continue;
    if (clip[f]->lo <= 0.0) uf.unite(n2 + f, g2.edge(f).u);
    if (clip[f]->hi >= 1.0) uf.unite(n2 + f, g2.edge(f).v);
  }
  std::map<std::size_t, VertexPlacement> by_root;
  for (std::size_t f = 0; f < g2.edge_count(); ++f) {
    if (!clip[f]) continue;
    VertexPlacement& pl = by_root[uf.find(n2 + f)];
    pl.portions.push_back({f, *clip[f]});
  }
  for (std::size_t w = 0; w < n2; ++w) {
    if (g2.degree(w) == 0 || distance(g2.position(w), center) > eps) continue;
    auto it = by_root.find(uf.find(w));
    if (it != by_root.end()) it->second.touched_vertices.push_back(w);
  }
  std::vector<VertexPlacement> out;
  for (auto& [root, pl] : by_root) {
    pl.owner = owner;
    double best = std::numeric_limits<double>::infinity();
    for (const Portion& p : pl.portions) {
      const PointOnGraph q = detail::nearest_in_portion(g2, p, center);
      const double d = distance(position(g2, q), center);
      // Portions are visited by increasing edge index, so strict < keeps the
      // smallest edge on ties.
      if (d < best) {
        best = d;
        pl.representative = q;
      }
    }
    out.push_back(std::move(pl));
  }
  std::sort(out.begin(), out.end(), [](const VertexPlacement& a, const VertexPlacement& b) {
    return a.portions.front().edge < b.portions.front().edge;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].index = i;
  return out;
}

inline PlacementTable compute_placements(const EmbeddedGraph& g1, const EmbeddedGraph& g2, double eps) {
  PlacementTable table(g1.vertex_count());
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) table[v] = placements_of(g2, g1.position(v), v, eps);
  return table;
}

/// Reachability data for one G1 edge (u, v) in canonical orientation.
struct EdgeReachability {
  std::size_t u = 0, v = 0;
  Mode mode = Mode::kStrong;
  // partners_u[a]: v-placements reachable from u-placement a; partners_v is
  // the transpose.
  std::vector<std::vector<std::size_t>> partners_u, partners_v;

  // Weak: tube components holding placements of both endpoints.
  struct Component {
    std::vector<std::size_t> u_placements, v_placements;
  };
  std::vector<Component> components;
  std::vector<MaybeInterval> tube;  // tube clip of every G2 edge

  // Strong: one witness path per reachable pair, from a point of C_u to a
  // point of C_v.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<PointOnGraph>> witness;

  bool reachable(std::size_t a, std::size_t b) const {
    const auto& p = partners_u[a];
    return std::binary_search(p.begin(), p.end(), b);
  }
};

struct ReachabilityIndex {
  Mode mode = Mode::kStrong;
  double eps = 0.0;
  std::vector<EdgeReachability> edges;
  std::size_t expansions = 0;  // strong exploration node expansions

  /// Is placement pa of vertex a compatible with placement pb of vertex b
  /// along G1 edge `edge` (either orientation)?
  bool reachable(std::size_t edge, std::size_t a, std::size_t pa, std::size_t b, std::size_t pb) const {
    const EdgeReachability& r = edges[edge];
    if (r.u == a && r.v == b) return r.reachable(pa, pb);
    if (r.u == b && r.v == a) return r.reachable(pb, pa);
    return false;
  }
};

namespace detail {

inline void transpose_partners(EdgeReachability& r, std::size_t nv) {
  r.partners_v.assign(nv, {});
  for (std::size_t a = 0; a < r.partners_u.size(); ++a) {
    std::sort(r.partners_u[a].begin(), r.partners_u[a].end());
    r.partners_u[a].erase(std::unique(r.partners_u[a].begin(), r.partners_u[a].end()), r.partners_u[a].end());
    for (std::size_t b : r.partners_u[a]) r.partners_v[b].push_back(a);
  }
}

}  // namespace detail

/// Weak reachability: placements are mutually reachable iff they lie in the
/// same connected component of G2 clipped to the tube around the edge.
inline EdgeReachability weak_edge_reachability(const EmbeddedGraph& g1, std::size_t edge, const PlacementTable& table,
                                               const EmbeddedGraph& g2, double eps) {
  EdgeReachability r;
  r.mode = Mode::kWeak;
  r.u = g1.edge(edge).u;
  r.v = g1.edge(edge).v;
  const Segment e = g1.segment(edge);
  const std::size_t n2 = g2.vertex_count();
  detail::UnionFind uf(n2 + g2.edge_count());
  r.tube.resize(g2.edge_count());
  for (std::size_t f = 0; f < g2.edge_count(); ++f) {
    r.tube[f] = clip_segment_to_tube(g2.segment(f), e, eps);
    if (!r.tube[f]) continue;
    if (r.tube[f]->lo <= 0.0) uf.unite(n2 + f, g2.edge(f).u);
    if (r.tube[f]->hi >= 1.0) uf.unite(n2 + f, g2.edge(f).v);
  }
  const auto& pu = table[r.u];
  const auto& pv = table[r.v];
  std::map<std::size_t, EdgeReachability::Component> comps;
  for (const auto& pl : pu) comps[uf.find(n2 + pl.portions.front().edge)].u_placements.push_back(pl.index);
  for (const auto& pl : pv) comps[uf.find(n2 + pl.portions.front().edge)].v_placements.push_back(pl.index);
  r.partners_u.assign(pu.size(), {});
  for (auto& [root, c] : comps) {
    if (c.u_placements.empty() || c.v_placements.empty()) continue;
    for (std::size_t a : c.u_placements) r.partners_u[a] = c.v_placements;
    r.components.push_back(std::move(c));
  }
  detail::transpose_partners(r, pv.size());
  return r;
}

/// Strong reachability by a monotone exploration of G2 inside the tube. The
/// state of a G2 vertex is the smallest parameter on e at which it can be
/// reached; moving to a neighbor y raises it to at least the start of y's
/// free interval and fails past its end.
inline EdgeReachability strong_edge_reachability(const EmbeddedGraph& g1, std::size_t edge,
                                                 const PlacementTable& table, const EmbeddedGraph& g2, double eps,
                                                 std::size_t* expansions = nullptr) {
  EdgeReachability r;
  r.mode = Mode::kStrong;
  r.u = g1.edge(edge).u;
  r.v = g1.edge(edge).v;
  const Segment e = g1.segment(edge);
  const Point2 pu_pos = e.a, pv_pos = e.b;
  const std::size_t n2 = g2.vertex_count();
  std::vector<MaybeInterval> free(n2);
  for (std::size_t w = 0; w < n2; ++w) free[w] = free_interval(e, g2.position(w), eps);

  const auto& pu = table[r.u];
  const auto& pv = table[r.v];
  r.partners_u.assign(pu.size(), {});
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  for (const VertexPlacement& cu : pu) {
    // parent[w] == kNone with seed_edge[w] == kNone: seeded at a touched
    // vertex; seed_edge set: entered from the portion on that edge.
    std::vector<double> low(n2, kInf);
    std::vector<std::size_t> parent(n2, kNone), seed_edge(n2, kNone);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    auto seed = [&](std::size_t w, std::size_t via_edge) {
      if (!free[w]) return;
      const double l = free[w]->lo;
      if (l < low[w]) {
        low[w] = l;
        parent[w] = kNone;
        seed_edge[w] = via_edge;
        heap.emplace(l, w);
      }
    };
    for (std::size_t w : cu.touched_vertices) seed(w, kNone);
    for (const Portion& p : cu.portions) {
      seed(g2.edge(p.edge).u, p.edge);
      seed(g2.edge(p.edge).v, p.edge);
    }
    // Touched seeds beat portion seeds at equal bound.
    for (std::size_t w : cu.touched_vertices) {
      if (free[w] && low[w] == free[w]->lo) seed_edge[w] = kNone;
    }
    while (!heap.empty()) {
      const auto [l, x] = heap.top();
      heap.pop();
      if (l > low[x]) continue;
      if (expansions) ++*expansions;
      for (const auto& inc : g2.neighbors(x)) {
        const std::size_t y = inc.neighbor;
        if (!free[y]) continue;
        const double ly = std::max(l, free[y]->lo);
        if (ly > free[y]->hi || ly >= low[y]) continue;
        low[y] = ly;
        parent[y] = x;
        seed_edge[y] = kNone;
        heap.emplace(ly, y);
      }
    }

    auto trace = [&](std::size_t x) {
      std::vector<std::size_t> chain;
      for (std::size_t w = x; w != kNone; w = parent[w]) chain.push_back(w);
      std::reverse(chain.begin(), chain.end());
      std::vector<PointOnGraph> path;
      const std::size_t first = chain.front();
      if (seed_edge[first] != kNone) {
        path.push_back(detail::nearest_in_portion(g2, *cu.portion_on(seed_edge[first]), pu_pos));
      }
      for (std::size_t w : chain) path.push_back(on_vertex(g2, w));
      return path;
    };

    for (const VertexPlacement& cv : pv) {
      std::optional<std::vector<PointOnGraph>> found;
      for (const Portion& p : cu.portions) {
        if (const Portion* q = cv.portion_on(p.edge)) {
          found = std::vector<PointOnGraph>{detail::nearest_in_portion(g2, p, pu_pos),
                                            detail::nearest_in_portion(g2, *q, pv_pos)};
          break;
        }
      }
      if (!found) {
        for (std::size_t w : cv.touched_vertices) {
          if (low[w] < kInf) {
            found = trace(w);
            break;
          }
        }
      }
      if (!found) {
        for (const Portion& q : cv.portions) {
          for (std::size_t w : {g2.edge(q.edge).u, g2.edge(q.edge).v}) {
            if (found || low[w] == kInf) continue;
            auto path = trace(w);
            path.push_back(detail::nearest_in_portion(g2, q, pv_pos));
            found = std::move(path);
          }
        }
      }
      if (found) {
        r.partners_u[cu.index].push_back(cv.index);
        r.witness[{cu.index, cv.index}] = std::move(*found);
      }
    }
  }
  detail::transpose_partners(r, pv.size());
  return r;
}

inline ReachabilityIndex compute_reachability(const EmbeddedGraph& g1, const EmbeddedGraph& g2,
                                              const PlacementTable& table, double eps, Mode mode) {
  ReachabilityIndex idx;
  idx.mode = mode;
  idx.eps = eps;
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    if (mode == Mode::kWeak) {
      idx.edges.push_back(weak_edge_reachability(g1, e, table, g2, eps));
    } else {
      idx.edges.push_back(strong_edge_reachability(g1, e, table, g2, eps, &idx.expansions));
    }
  }
  return idx;
}

struct PruneReport {
  std::vector<std::size_t> survivors;                        // per G1 vertex
  std::vector<std::pair<std::size_t, std::size_t>> deleted;  // (vertex, placement) in deletion order
};

/// Deletes placements without a live partner on some incident edge until a
/// fixpoint is reached. The fixpoint is the largest set in which every
/// placement is supported, so it does not depend on the processing order;
/// a seed shuffles the order for testing that.
inline PruneReport prune_invalid(PlacementTable& table, const ReachabilityIndex& idx, const EmbeddedGraph& g1,
                                 std::optional<std::uint64_t> shuffle_seed = std::nullopt) {
  for (const EdgeReachability& r : idx.edges) {
    if (r.mode != idx.mode) throw Error(ErrorCode::kModeMismatch, "reachability entries use different modes");
  }
  // support[e][side][p]: live partners of placement p at endpoint `side`.
  std::vector<std::array<std::vector<std::size_t>, 2>> support(idx.edges.size());
  for (std::size_t e = 0; e < idx.edges.size(); ++e) {
    const EdgeReachability& r = idx.edges[e];
    for (int side = 0; side < 2; ++side) {
      const auto& partners = side == 0 ? r.partners_u : r.partners_v;
      const std::size_t other = side == 0 ? r.v : r.u;
      support[e][side].resize(partners.size());
      for (std::size_t p = 0; p < partners.size(); ++p) {
        std::size_t live = 0;
        for (std::size_t q : partners[p]) live += table[other][q].alive ? 1 : 0;
        support[e][side][p] = live;
      }
    }
  }
  // Incident G1 edges per vertex, with the side the vertex occupies.
  std::vector<std::vector<std::pair<std::size_t, int>>> incident(g1.vertex_count());
  for (std::size_t e = 0; e < idx.edges.size(); ++e) {
    incident[idx.edges[e].u].emplace_back(e, 0);
    incident[idx.edges[e].v].emplace_back(e, 1);
  }

  PruneReport report;
  std::vector<std::pair<std::size_t, std::size_t>> work;
  auto kill = [&](std::size_t v, std::size_t p) {
    if (!table[v][p].alive) return;
    table[v][p].alive = false;
    report.deleted.emplace_back(v, p);
    work.emplace_back(v, p);
  };
  std::vector<std::pair<std::size_t, std::size_t>> initial;
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    for (std::size_t p = 0; p < table[v].size(); ++p) {
      if (!table[v][p].alive) continue;
      for (const auto& [e, side] : incident[v]) {
        if (support[e][side][p] == 0) {
          initial.emplace_back(v, p);
          break;
        }
      }
    }
  }
  std::mt19937_64 rng(shuffle_seed.value_or(0));
  if (shuffle_seed) std::shuffle(initial.begin(), initial.end(), rng);
  for (const auto& [v, p] : initial) kill(v, p);
  while (!work.empty()) {
    std::size_t pick = work.size() - 1;
    if (shuffle_seed) pick = std::uniform_int_distribution<std::size_t>(0, work.size() - 1)(rng);
    const auto [v, p] = work[pick];
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(pick));
    for (const auto& [e, side] : incident[v]) {
      const EdgeReachability& r = idx.edges[e];
      const auto& partners = side == 0 ? r.partners_u[p] : r.partners_v[p];
      const std::size_t other = side == 0 ? r.v : r.u;
      for (std::size_t q : partners) {
        if (--support[e][1 - side][q] == 0) kill(other, q);
      }
    }
  }
  report.survivors.assign(g1.vertex_count(), 0);
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    for (const auto& pl : table[v]) report.survivors[v] += pl.alive ? 1 : 0;
  }
  return report;
}

}  // namespace graphdist
