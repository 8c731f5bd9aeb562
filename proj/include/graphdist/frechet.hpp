#pragma once

// Curve kernels: segment-vs-path strong decision, exact Hausdorff and weak
// value of a segment against a path, and free-space decisions for general
// polylines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <initializer_list>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "graphdist/geometry.hpp"

namespace graphdist {

struct Polyline {
  std::vector<Point2> pts;

  Polyline() = default;
  Polyline(std::initializer_list<Point2> init) : pts(init) {}
  explicit Polyline(std::vector<Point2> p) : pts(std::move(p)) {}

  std::size_t size() const { return pts.size(); }
  bool empty() const { return pts.empty(); }
  const Point2& operator[](std::size_t i) const { return pts[i]; }
  const Point2& front() const { return pts.front(); }
  const Point2& back() const { return pts.back(); }
  Segment segment(std::size_t i) const { return {pts[i], pts[i + 1]}; }

  Polyline reversed() const {
    Polyline r = *this;
    std::reverse(r.pts.begin(), r.pts.end());
    return r;
  }

  /// Drops consecutive duplicate points.
  Polyline collapsed() const {
    Polyline r;
    for (const Point2& p : pts) {
      if (r.pts.empty() || !(r.pts.back() == p)) r.pts.push_back(p);
    }
    return r;
  }
};

/// Strong Frechet decision for a segment against a path, by propagating the
/// lowest reachable parameter on e across the path vertices. Each cell of
/// the free space is convex, so the greedy lower bound is exact.
inline bool strong_decide_segment_path(const Segment& e, const Polyline& path, double eps) {
  const Polyline p = path.collapsed();
  if (p.empty()) return false;
  if (distance(e.a, p.front()) > eps) return false;
  if (distance(e.b, p.back()) > eps) return false;
  if (p.size() == 1) return true;
  double l = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    const MaybeInterval iv = free_interval(e, p[i], eps);
    if (!iv) return false;
    l = std::max(l, iv->lo);
    if (l > iv->hi) return false;
  }
  return true;
}

namespace detail {

// Exact distance from e(t) to the path.
inline double path_distance_at(const Segment& e, const Polyline& p, double t) {
  const Point2 q = e.at(t);
  if (p.size() == 1) return distance(q, p[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j + 1 < p.size(); ++j) best = std::min(best, point_segment_distance(q, p.segment(j)));
  return best;
}

// Parameters t in [0,1] where two distance features along e(t) agree. A
// feature is a point (squared distance quadratic in t) or a supporting line
// (signed distance affine in t).
struct Feature {
  bool is_line = false;
  Point2 p;       // point, or a point on the line
  Point2 normal;  // unit normal for lines
};

inline void push_if_unit(std::vector<double>& out, double t) {
  if (std::isfinite(t) && t >= 0.0 && t <= 1.0) out.push_back(t);
}

inline void feature_crossings(const Segment& e, const Feature& f, const Feature& g, std::vector<double>& out) {
  const Point2 d = e.direction();
  if (!f.is_line && !g.is_line) {
    // |a + t d - p|^2 = |a + t d - q|^2 is affine in t.
    const Point2 pq = g.p - f.p;
    const double denom = 2.0 * dot(d, pq);
    if (denom != 0.0) push_if_unit(out, (norm2(g.p - e.a) - norm2(f.p - e.a)) / denom);
    return;
  }
  if (f.is_line && g.is_line) {
    // n1.(a + t d - p1) = +-(n2.(a + t d - p2))
    const double a1 = dot(f.normal, e.a - f.p), b1 = dot(f.normal, d);
    const double a2 = dot(g.normal, e.a - g.p), b2 = dot(g.normal, d);
    if (b1 - b2 != 0.0) push_if_unit(out, (a2 - a1) / (b1 - b2));
    if (b1 + b2 != 0.0) push_if_unit(out, -(a1 + a2) / (b1 + b2));
    return;
  }
  const Feature& pt = f.is_line ? g : f;
  const Feature& ln = f.is_line ? f : g;
  // |a + t d - p|^2 - (n.(a + t d - q))^2 = 0
  const Point2 w = e.a - pt.p;
  const double la = dot(ln.normal, e.a - ln.p), lb = dot(ln.normal, d);
  const double qa = norm2(d) - lb * lb;
  const double qb = 2.0 * dot(w, d) - 2.0 * la * lb;
  const double qc = norm2(w) - la * la;
  if (std::abs(qa) < 1e-300) {
    if (qb != 0.0) push_if_unit(out, -qc / qb);
    return;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return;
  const double sq = std::sqrt(disc);
  push_if_unit(out, (-qb - sq) / (2.0 * qa));
  push_if_unit(out, (-qb + sq) / (2.0 * qa));
}

}  // namespace detail

/// Symmetric Hausdorff distance between segment e and path P. The e-to-P
/// side maximizes the lower envelope of convex distance functions, which
/// peaks at t = 0, t = 1 or where two features tie.
inline double hausdorff_segment_path(const Segment& e, const Polyline& path) {
  const Polyline p = path.collapsed();
  if (p.empty()) return std::numeric_limits<double>::infinity();
  double p_to_e = 0.0;
  for (const Point2& q : p.pts) p_to_e = std::max(p_to_e, point_segment_distance(q, e));

  std::vector<detail::Feature> feats;
  for (const Point2& q : p.pts) feats.push_back({false, q, {}});
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    const Point2 d = p[j + 1] - p[j];
    const double len = norm(d);
    feats.push_back({true, p[j], {-d.y / len, d.x / len}});
  }
  std::vector<double> ts{0.0, 1.0};
  for (std::size_t a = 0; a < feats.size(); ++a) {
    for (std::size_t b = a + 1; b < feats.size(); ++b) detail::feature_crossings(e, feats[a], feats[b], ts);
  }
  double e_to_p = 0.0;
  for (double t : ts) e_to_p = std::max(e_to_p, detail::path_distance_at(e, p, t));
  return std::max(p_to_e, e_to_p);
}

/// Weak Frechet distance of segment e to path P with fixed endpoints.
inline double weak_value_segment_path(const Segment& e, const Polyline& path) {
  if (path.empty()) return std::numeric_limits<double>::infinity();
  return std::max({distance(e.a, path.front()), distance(e.b, path.back()), hausdorff_segment_path(e, path)});
}

/// Exact strong Frechet distance of segment e to path P: the smallest
/// candidate event value (endpoint distances, vertex-to-segment distances in
/// both directions, bisector crossings in both directions) that decides YES.
inline double strong_value_segment_path(const Segment& e, const Polyline& path) {
  const Polyline p = path.collapsed();
  if (p.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> cand{distance(e.a, p.front()), distance(e.b, p.back())};
  for (const Point2& q : p.pts) cand.push_back(point_segment_distance(q, e));
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    cand.push_back(point_segment_distance(e.a, p.segment(j)));
    cand.push_back(point_segment_distance(e.b, p.segment(j)));
    if (auto c = critical_bisector(e.a, e.b, p.segment(j))) cand.push_back(c->value);
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (auto c = critical_bisector(p[i], p[j], e)) cand.push_back(c->value);
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const double scale = 1.0 + e.length();
  std::size_t lo = 0, hi = cand.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (strong_decide_segment_path(e, p, cand[mid] + 1e-12 * scale)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return cand[lo];
}

/// Classic free-space decision for the strong Frechet distance.
inline bool strong_decide_polyline(const Polyline& f_in, const Polyline& g_in, double eps) {
  const Polyline f = f_in.collapsed();
  const Polyline g = g_in.collapsed();
  if (f.empty() || g.empty()) return false;
  if (distance(f.front(), g.front()) > eps || distance(f.back(), g.back()) > eps) return false;
  if (f.size() == 1 || g.size() == 1) {
    const Polyline& pt = f.size() == 1 ? f : g;
    const Polyline& other = f.size() == 1 ? g : f;
    for (const Point2& q : other.pts) {
      if (distance(q, pt.front()) > eps) return false;
    }
    return true;
  }
  const std::size_t n = f.size() - 1;  // segments of f (horizontal)
  const std::size_t m = g.size() - 1;  // segments of g (vertical)
  // lf[i][j]: free part of g-segment j seen from f-vertex i (vertical edge)
  // bf[i][j]: free part of f-segment i seen from g-vertex j (horizontal edge)
  std::vector<std::vector<MaybeInterval>> lr(n + 1, std::vector<MaybeInterval>(m));
  std::vector<std::vector<MaybeInterval>> br(n, std::vector<MaybeInterval>(m + 1));
  auto lf = [&](std::size_t i, std::size_t j) { return free_interval(g.segment(j), f[i], eps); };
  auto bf = [&](std::size_t i, std::size_t j) { return free_interval(f.segment(i), g[j], eps); };

  for (std::size_t j = 0; j < m; ++j) {
    const MaybeInterval iv = lf(0, j);
    if (!iv || iv->lo > 0.0) break;
    lr[0][j] = iv;
    if (iv->hi < 1.0) break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const MaybeInterval iv = bf(i, 0);
    if (!iv || iv->lo > 0.0) break;
    br[i][0] = iv;
    if (iv->hi < 1.0) break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const MaybeInterval& left = lr[i][j];
      const MaybeInterval& bottom = br[i][j];
      if (!left && !bottom) continue;
      if (const MaybeInterval right = lf(i + 1, j)) {
        if (bottom) {
          lr[i + 1][j] = right;
        } else if (std::max(left->lo, right->lo) <= right->hi) {
          lr[i + 1][j] = Interval{std::max(left->lo, right->lo), right->hi};
        }
      }
      if (const MaybeInterval top = bf(i, j + 1)) {
        if (left) {
          br[i][j + 1] = top;
        } else if (std::max(bottom->lo, top->lo) <= top->hi) {
          br[i][j + 1] = Interval{std::max(bottom->lo, top->lo), top->hi};
        }
      }
    }
  }
  return (lr[n][m - 1] && lr[n][m - 1]->hi >= 1.0) || (br[n - 1][m] && br[n - 1][m]->hi >= 1.0);
}

/// Weak Frechet decision: connectivity of the free space through shared
/// cell boundaries. With boundary_fixed the search runs between the corners;
/// otherwise f must be covered entirely while g may be entered and left
/// anywhere, i.e. any free point on the left side of the diagram to any
/// free point on the right side.
inline bool weak_decide_polyline(const Polyline& f_in, const Polyline& g_in, double eps, bool boundary_fixed) {
  const Polyline f = f_in.collapsed();
  const Polyline g = g_in.collapsed();
  if (f.empty() || g.empty()) return false;
  if (boundary_fixed && (distance(f.front(), g.front()) > eps || distance(f.back(), g.back()) > eps)) return false;
  if (f.size() == 1) {
    if (boundary_fixed) {
      for (const Point2& q : g.pts) {
        if (distance(q, f.front()) > eps) return false;
      }
      return true;
    }
    for (const Point2& q : g.pts) {
      if (distance(q, f.front()) <= eps) return true;
    }
    for (std::size_t j = 0; j + 1 < g.size(); ++j) {
      if (point_segment_distance(f.front(), g.segment(j)) <= eps) return true;
    }
    return false;
  }
  if (g.size() == 1) {
    for (const Point2& q : f.pts) {
      if (distance(q, g.front()) > eps) return false;
    }
    return true;
  }
  const std::size_t n = f.size() - 1;
  const std::size_t m = g.size() - 1;
  // Cells (i,j); within a cell the free region is convex, so two adjacent
  // cells connect iff their common boundary has a free point.
  auto cell_free = [&](std::size_t i, std::size_t j) {
    return segment_segment_distance(f.segment(i), g.segment(j)) <= eps;
  };
  std::vector<std::vector<char>> seen(n, std::vector<char>(m, 0));
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto push = [&](std::size_t i, std::size_t j) {
    if (!seen[i][j] && cell_free(i, j)) {
      seen[i][j] = 1;
      queue.emplace_back(i, j);
    }
  };
  if (boundary_fixed) {
    push(0, 0);
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      if (free_interval(g.segment(j), f.front(), eps)) push(0, j);
    }
  }
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    if (i == n - 1) {
      if (boundary_fixed ? j == m - 1 : static_cast<bool>(free_interval(g.segment(j), f.back(), eps))) return true;
    }
    if (i + 1 < n && free_interval(g.segment(j), f[i + 1], eps)) push(i + 1, j);
    if (i > 0 && free_interval(g.segment(j), f[i], eps)) push(i - 1, j);
    if (j + 1 < m && free_interval(f.segment(i), g[j + 1], eps)) push(i, j + 1);
    if (j > 0 && free_interval(f.segment(i), g[j], eps)) push(i, j - 1);
  }
  return false;
}

}  // namespace graphdist
