#pragma once

// Shared helpers for the unit and acceptance suites: graph builders,
// seeded random instance generators and independent numeric oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "graphdist/graphdist.hpp"

namespace gdtest {

using namespace graphdist;

inline EmbeddedGraph make_graph(const std::vector<std::tuple<VertexId, double, double>>& vs,
                                const std::vector<std::pair<VertexId, VertexId>>& es) {
  RawGraph raw;
  for (const auto& [id, x, y] : vs) raw.vertices.push_back({id, x, y});
  raw.edges = es;
  return EmbeddedGraph::validate(raw);
}

/// Path graph through the given points, ids 0..k-1.
inline EmbeddedGraph path_graph(const std::vector<Point2>& pts) {
  RawGraph raw;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    raw.vertices.push_back({static_cast<VertexId>(i), pts[i].x, pts[i].y});
    if (i > 0) raw.edges.emplace_back(static_cast<VertexId>(i - 1), static_cast<VertexId>(i));
  }
  return EmbeddedGraph::validate(raw);
}

inline EmbeddedGraph unit_square(double s = 1.0, Point2 o = {0, 0}) {
  return make_graph({{0, o.x, o.y}, {1, o.x + s, o.y}, {2, o.x + s, o.y + s}, {3, o.x, o.y + s}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

inline std::string data_path(const std::string& name) { return std::string(GRAPHDIST_DATA_DIR) + "/" + name; }

inline EmbeddedGraph load_fixture(const std::string& name) {
  return EmbeddedGraph::validate(raw_graph_from_json(read_json_file(data_path(name))));
}

/// Every edge split at its midpoint; new vertex ids continue after the max.
inline EmbeddedGraph subdivide(const EmbeddedGraph& g, int pieces = 2) {
  RawGraph raw = g.to_raw();
  VertexId next = 0;
  for (const auto& v : raw.vertices) next = std::max(next, v.id + 1);
  raw.edges.clear();
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Segment s = g.segment(e);
    VertexId prev = g.id(g.edge(e).u);
    for (int k = 1; k < pieces; ++k) {
      const Point2 p = s.at(static_cast<double>(k) / pieces);
      raw.vertices.push_back({next, p.x, p.y});
      raw.edges.emplace_back(prev, next);
      prev = next++;
    }
    raw.edges.emplace_back(prev, g.id(g.edge(e).v));
  }
  return EmbeddedGraph::validate(raw);
}

template <class F>
EmbeddedGraph transform(const EmbeddedGraph& g, F f) {
  RawGraph raw = g.to_raw();
  for (auto& v : raw.vertices) {
    const Point2 p = f(Point2{v.x, v.y});
    v.x = p.x;
    v.y = p.y;
  }
  return EmbeddedGraph::validate(raw);
}

inline Point2 rigid(Point2 p, double angle, Point2 shift) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y};
}

// Random generation.

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }
  Point2 point(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }
  Point2 near(Point2 p, double r) { return {p.x + uniform(-r, r), p.y + uniform(-r, r)}; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

/// Points pairwise at least `sep` apart.
inline std::vector<Point2> spread_points(Rng& rng, int n, double lo, double hi, double sep) {
  std::vector<Point2> pts;
  int guard = 0;
  while (static_cast<int>(pts.size()) < n && guard++ < 100000) {
    const Point2 p = rng.point(lo, hi);
    bool ok = true;
    for (const Point2& q : pts) ok = ok && distance(p, q) >= sep;
    if (ok) pts.push_back(p);
  }
  return pts;
}

inline bool edge_fits_plane(const RawGraph& g, VertexId a, VertexId b, double clearance = 1e-3) {
  auto pos = [&](VertexId id) {
    for (const auto& v : g.vertices)
      if (v.id == id) return Point2{v.x, v.y};
    return Point2{};
  };
  const Segment s{pos(a), pos(b)};
  for (const auto& [u, v] : g.edges) {
    if ((u == a && v == b) || (u == b && v == a)) return false;
    const Segment t{pos(u), pos(v)};
    if (u == a || u == b || v == a || v == b) {
      const VertexId shared = (u == a || u == b) ? u : v;
      const VertexId far_t = shared == u ? v : u;
      const VertexId far_s = shared == a ? b : a;
      if (point_segment_distance(pos(far_t), s) < clearance || point_segment_distance(pos(far_s), t) < clearance)
        return false;
      continue;
    }
    if (segment_segment_distance(s, t) < clearance) return false;
  }
  for (const auto& v : g.vertices) {
    if (v.id == a || v.id == b) continue;
    if (point_segment_distance({v.x, v.y}, s) < clearance) return false;
  }
  return true;
}

inline RawGraph raw_from_points(const std::vector<Point2>& pts, VertexId first_id = 0) {
  RawGraph raw;
  for (std::size_t i = 0; i < pts.size(); ++i)
    raw.vertices.push_back({first_id + static_cast<VertexId>(i), pts[i].x, pts[i].y});
  return raw;
}

/// Random plane graph: candidate edges by increasing jittered length,
/// each added when it crosses nothing.
inline RawGraph random_plane_raw(Rng& rng, const std::vector<Point2>& pts, int max_edges, double keep = 0.7) {
  RawGraph raw = raw_from_points(pts);
  std::vector<std::tuple<double, VertexId, VertexId>> cand;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      cand.emplace_back(distance(pts[i], pts[j]) * rng.uniform(0.7, 1.3), static_cast<VertexId>(i),
                        static_cast<VertexId>(j));
  std::sort(cand.begin(), cand.end());
  for (const auto& [w, a, b] : cand) {
    if (static_cast<int>(raw.edges.size()) >= max_edges) break;
    if (!rng.coin(keep)) continue;
    if (edge_fits_plane(raw, a, b)) raw.edges.emplace_back(a, b);
  }
  return raw;
}

/// Random graph without vertex-on-edge degeneracies (crossings allowed).
inline RawGraph random_general_raw(Rng& rng, const std::vector<Point2>& pts, int edges) {
  RawGraph raw = raw_from_points(pts);
  int guard = 0;
  while (static_cast<int>(raw.edges.size()) < edges && guard++ < 1000) {
    const int a = rng.integer(0, static_cast<int>(pts.size()) - 1);
    const int b = rng.integer(0, static_cast<int>(pts.size()) - 1);
    if (a == b) continue;
    bool dup = false;
    for (const auto& [u, v] : raw.edges) dup = dup || (u == a && v == b) || (u == b && v == a);
    if (dup) continue;
    bool clear = true;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (static_cast<int>(k) == a || static_cast<int>(k) == b) continue;
      clear = clear && point_segment_distance(pts[k], {pts[a], pts[b]}) > 1e-3;
    }
    if (clear) raw.edges.emplace_back(a, b);
  }
  return raw;
}

/// Random tree on n points in [lo,hi]^2.
inline EmbeddedGraph random_tree(Rng& rng, int n, double lo = 0.0, double hi = 4.0) {
  const auto pts = spread_points(rng, n, lo, hi, 0.3);
  RawGraph raw = raw_from_points(pts);
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) raw.edges.emplace_back(rng.integer(0, i - 1), i);
  return EmbeddedGraph::validate(raw);
}

inline std::vector<Point2> random_polyline(Rng& rng, int n, double lo = 0.0, double hi = 4.0) {
  return spread_points(rng, n, lo, hi, 0.2);
}

/// Keeps the topology, moves every vertex by at most r.
inline EmbeddedGraph jitter(Rng& rng, const EmbeddedGraph& g, double r) {
  return transform(g, [&](Point2 p) { return rng.near(p, r); });
}

// Curve distances by bisection on the decision procedures.

template <class Decide>
double bisect_value(Decide decide, double hi, int iters = 60) {
  double lo = 0.0;
  while (!decide(hi)) hi *= 2.0;
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (decide(mid) ? hi : lo) = mid;
  }
  return hi;
}

inline double curve_bound(const Polyline& f, const Polyline& g) {
  double d = 0.0;
  for (const Point2& p : f.pts)
    for (const Point2& q : g.pts) d = std::max(d, distance(p, q));
  return d + 1.0;
}

/// Strong Frechet distance, orientation of g chosen freely.
inline double frechet_value(const Polyline& f, const Polyline& g) {
  const double hi = curve_bound(f, g);
  const double fwd = bisect_value([&](double e) { return strong_decide_polyline(f, g, e); }, hi);
  const double rev = bisect_value([&](double e) { return strong_decide_polyline(f, g.reversed(), e); }, hi);
  return std::min(fwd, rev);
}

/// Weak Frechet distance without boundary restriction.
inline double weak_free_value(const Polyline& f, const Polyline& g) {
  return bisect_value([&](double e) { return weak_decide_polyline(f, g, e, false); }, curve_bound(f, g));
}

/// Dense-sampling Hausdorff distance between a segment and a polyline. The
/// best samples on each side are refined by ternary search within one
/// sample spacing.
inline double sampled_hausdorff(const Segment& e, const Polyline& p, int samples = 10000) {
  auto dist_to_path = [&](Point2 q) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < p.size(); ++i) d = std::min(d, point_segment_distance(q, p.segment(i)));
    if (p.size() == 1) d = distance(q, p[0]);
    return d;
  };
  auto side = [&](const std::function<Point2(double)>& at, const std::function<double(Point2)>& dist) {
    std::vector<std::pair<double, double>> vals;
    for (int i = 0; i <= samples; ++i) {
      const double t = static_cast<double>(i) / samples;
      vals.emplace_back(dist(at(t)), t);
    }
    std::sort(vals.rbegin(), vals.rend());
    double best = vals.front().first;
    const double h = 1.0 / samples;
    for (std::size_t k = 0; k < std::min<std::size_t>(8, vals.size()); ++k) {
      double lo = std::max(0.0, vals[k].second - h), hi = std::min(1.0, vals[k].second + h);
      for (int it = 0; it < 100; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (dist(at(m1)) < dist(at(m2))) lo = m1; else hi = m2;
      }
      best = std::max(best, dist(at(0.5 * (lo + hi))));
    }
    return best;
  };
  double h = side([&](double t) { return e.at(t); }, dist_to_path);
  if (p.size() == 1) return std::max(h, point_segment_distance(p[0], e));
  // The path side is parameterized piecewise, one unit per segment.
  const double k = static_cast<double>(p.size() - 1);
  auto path_at = [&](double s) {
    const double x = std::min(s * k, k - 1e-12);
    const std::size_t i = static_cast<std::size_t>(x);
    return p.segment(i).at(x - static_cast<double>(i));
  };
  h = std::max(h, side(path_at, [&](Point2 q) { return point_segment_distance(q, e); }));
  for (const Point2& q : p.pts) h = std::max(h, point_segment_distance(q, e));
  return h;
}

/// Discretized free-space reachability on a sample grid (monotone).
inline bool sampled_strong(const Polyline& f, const Polyline& g, double eps, double h = 0.01) {
  auto samples = [&](const Polyline& c) {
    std::vector<Point2> out{c.front()};
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      const int k = std::max(1, static_cast<int>(std::ceil(distance(c[i], c[i + 1]) / h)));
      for (int j = 1; j <= k; ++j) out.push_back(c.segment(i).at(static_cast<double>(j) / k));
    }
    return out;
  };
  const auto a = samples(f), b = samples(g);
  std::vector<std::vector<char>> r(a.size(), std::vector<char>(b.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (distance(a[i], b[j]) > eps) continue;
      r[i][j] = (i == 0 && j == 0) || (i > 0 && r[i - 1][j]) || (j > 0 && r[i][j - 1]) ||
                (i > 0 && j > 0 && r[i - 1][j - 1]);
    }
  return r.back().back() != 0;
}

/// Random eps in [lo,hi] at least `gap` away from every critical value.
inline double eps_away_from_criticals(Rng& rng, const EmbeddedGraph& g1, const EmbeddedGraph& g2, double lo,
                                      double hi, double gap) {
  const CriticalValueSet cs = critical_values(g1, g2);
  for (int tries = 0; tries < 1000; ++tries) {
    const double e = rng.uniform(lo, hi);
    bool ok = true;
    for (const auto& c : cs.values) ok = ok && std::abs(c.value - e) >= gap;
    if (ok) return e;
  }
  return hi;
}

}  // namespace gdtest
