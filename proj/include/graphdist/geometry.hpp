#pragma once

// Planar primitives shared by every other module: points, segments,
// parameter intervals, ball and tube clipping and the closed-form
// expressions for critical distance values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace graphdist {

/// Comparison slack for geometric predicates.
struct Tolerance {
  double eps_geom = 1e-9;
};

inline constexpr Tolerance kDefaultTolerance{};

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline constexpr double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct Segment {
  Point2 a;
  Point2 b;

  constexpr Point2 at(double t) const { return a + t * (b - a); }
  constexpr Point2 direction() const { return b - a; }
  constexpr bool degenerate() const { return a == b; }
  double length() const { return distance(a, b); }
  constexpr Segment reversed() const { return {b, a}; }
};

/// Closed parameter sub-range of [0,1].
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  constexpr bool contains(double t, double slack = 0.0) const {
    return t >= lo - slack && t <= hi + slack;
  }
  constexpr double length() const { return hi - lo; }
  friend constexpr bool operator==(Interval, Interval) = default;
};

using MaybeInterval = std::optional<Interval>;

/// Segment parameter of the point closest to p (clamped to [0,1]).
inline double closest_parameter(Point2 p, const Segment& s) {
  const Point2 d = s.direction();
  const double len2 = norm2(d);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
}

inline double point_segment_distance(Point2 p, const Segment& s) {
  return distance(p, s.at(closest_parameter(p, s)));
}

namespace detail {

// Roots of a t^2 + b t + c with a > 0, smaller root first; nullopt when the
// discriminant is negative. Uses the cancellation-free (citardauq) branch.
inline std::optional<std::pair<double, double>> quadratic_roots(double a, double b, double c) {
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q == 0.0) return std::pair{0.0, 0.0};
  double r1 = q / a;
  double r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return std::pair{r1, r2};
}

}  // namespace detail

/// Parameters t of s with |s(t) - c| <= r. The disk is convex so the result
/// is a single interval. Degenerate s is allowed.
inline MaybeInterval clip_segment_to_disk(const Segment& s, Point2 c, double r) {
  if (r < 0.0) return std::nullopt;
  if (s.degenerate()) {
    if (distance(s.a, c) <= r) return Interval{0.0, 1.0};
    return std::nullopt;
  }
  const double tmin = closest_parameter(c, s);
  if (distance(s.at(tmin), c) > r) return std::nullopt;

  const Point2 d = s.direction();
  const Point2 f = s.a - c;
  const double qa = norm2(d);
  const double qb = 2.0 * dot(d, f);
  const double qc = norm2(f) - r * r;
  double lo = tmin;
  double hi = tmin;
  if (auto roots = detail::quadratic_roots(qa, qb, qc)) {
    lo = std::max(0.0, roots->first);
    hi = std::min(1.0, roots->second);
  }
  // Rounding may push the roots past the closest point near tangency.
  lo = std::min(lo, tmin);
  hi = std::max(hi, tmin);
  // Endpoints inside the disk are exact members.
  if (distance(s.a, c) <= r) lo = 0.0;
  if (distance(s.b, c) <= r) hi = 1.0;
  return Interval{lo, hi};
}

/// Free space of a point w against segment e: {t : |e(t) - w| <= eps}.
inline MaybeInterval free_interval(const Segment& e, Point2 w, double eps) {
  return clip_segment_to_disk(e, w, eps);
}

/// Parameters t of s with dist(s(t), e) <= eps (the stadium around e).
/// dist(., e) is convex along s, so the result is one interval: the union of
/// the clips against both end caps and the central rectangle.
inline MaybeInterval clip_segment_to_tube(const Segment& s, const Segment& e, double eps) {
  if (e.degenerate()) return clip_segment_to_disk(s, e.a, eps);
  if (s.degenerate()) {
    if (point_segment_distance(s.a, e) <= eps) return Interval{0.0, 1.0};
    return std::nullopt;
  }

  MaybeInterval acc;
  auto absorb = [&acc](MaybeInterval iv) {
    if (!iv) return;
    if (!acc) {
      acc = iv;
    } else {
      acc->lo = std::min(acc->lo, iv->lo);
      acc->hi = std::max(acc->hi, iv->hi);
    }
  };
  absorb(clip_segment_to_disk(s, e.a, eps));
  absorb(clip_segment_to_disk(s, e.b, eps));

  // Liang-Barsky against the rectangle {0 <= u <= L, |v| <= eps} in the
  // frame of e.
  const Point2 dir = e.direction();
  const double len = norm(dir);
  const Point2 ux = (1.0 / len) * dir;
  const Point2 uy{-ux.y, ux.x};
  const Point2 p0 = s.a - e.a;
  const Point2 ds = s.direction();
  const double u0 = dot(p0, ux), du = dot(ds, ux);
  const double v0 = dot(p0, uy), dv = dot(ds, uy);
  double t0 = 0.0, t1 = 1.0;
  bool inside = true;
  auto clip = [&](double p, double q) {
    // Keeps the part of the segment where p * t <= q.
    if (p == 0.0) {
      if (q < 0.0) inside = false;
      return;
    }
    const double r = q / p;
    if (p < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
  };
  clip(-du, u0);          // u >= 0
  clip(du, len - u0);     // u <= L
  clip(-dv, v0 + eps);    // v >= -eps
  clip(dv, eps - v0);     // v <= eps
  if (inside && t0 <= t1) absorb(Interval{t0, t1});

  if (acc) {
    if (point_segment_distance(s.a, e) <= eps) acc->lo = 0.0;
    if (point_segment_distance(s.b, e) <= eps) acc->hi = 1.0;
  }
  return acc;
}

/// Which combinatorial event a critical distance value belongs to.
enum class CriticalType : std::uint8_t {
  kVertexEdge = 1,    // a G1 vertex reaches a G2 edge: a placement emerges
  kVertexVertex = 2,  // a G1 vertex reaches a G2 vertex: placements merge
  kFreeSpace = 3,     // a free-space passage on a G1 edge opens
};

struct CriticalCandidate {
  double value = 0.0;
  CriticalType type = CriticalType::kVertexEdge;
};

/// Type 1: a new placement of v emerges on s.
inline CriticalCandidate critical_vertex_edge(Point2 v, const Segment& s) {
  return {point_segment_distance(v, s), CriticalType::kVertexEdge};
}

/// Type 2: placements of v merge at w.
inline CriticalCandidate critical_vertex_vertex(Point2 v, Point2 w) {
  return {distance(v, w), CriticalType::kVertexVertex};
}

/// Type 3a: the free interval of w on e becomes nonempty.
inline CriticalCandidate critical_point_edge(Point2 w, const Segment& e) {
  return {point_segment_distance(w, e), CriticalType::kFreeSpace};
}

/// Type 3b: the free intervals of w1 and w2 on e start to overlap in a
/// monotone way. The value is |q - w1| for the point q where the
/// perpendicular bisector of w1 w2 meets e, if it does.
inline std::optional<CriticalCandidate> critical_bisector(Point2 w1, Point2 w2, const Segment& e,
                                                          Tolerance tol = kDefaultTolerance) {
  const Point2 n = w2 - w1;
  if (norm2(n) == 0.0) return std::nullopt;
  const double rhs = 0.5 * (norm2(w2) - norm2(w1));
  const Point2 d = e.direction();
  const double denom = dot(n, d);
  if (denom == 0.0) return std::nullopt;
  const double t = (rhs - dot(n, e.a)) / denom;
  const double slack = tol.eps_geom / std::max(1.0, e.length());
  if (t < -slack || t > 1.0 + slack) return std::nullopt;
  const Point2 q = e.at(std::clamp(t, 0.0, 1.0));
  return CriticalCandidate{distance(q, w1), CriticalType::kFreeSpace};
}

/// Orientation sign of (a, b, c) with a scale-aware dead band.
inline int orientation(Point2 a, Point2 b, Point2 c, double slack) {
  const double v = cross(b - a, c - a);
  const double scale = std::max({norm(b - a), norm(c - a), 1e-300});
  if (v > slack * scale) return 1;
  if (v < -slack * scale) return -1;
  return 0;
}

/// Closed segments s and t share at least one point (within slack).
inline bool segments_intersect(const Segment& s, const Segment& t, double slack = kDefaultTolerance.eps_geom) {
  const int o1 = orientation(s.a, s.b, t.a, slack);
  const int o2 = orientation(s.a, s.b, t.b, slack);
  const int o3 = orientation(t.a, t.b, s.a, slack);
  const int o4 = orientation(t.a, t.b, s.b, slack);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return point_segment_distance(t.a, s) <= slack || point_segment_distance(t.b, s) <= slack ||
         point_segment_distance(s.a, t) <= slack || point_segment_distance(s.b, t) <= slack;
}

inline double segment_segment_distance(const Segment& s, const Segment& t) {
  if (segments_intersect(s, t, 0.0)) return 0.0;
  return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                   point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

}  // namespace graphdist
