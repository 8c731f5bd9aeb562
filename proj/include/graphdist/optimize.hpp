#pragma once

// Exact directed and undirected distances: every value at which the
// decision can flip is enumerated, and a binary search over the sorted list
// finds the smallest one that decides YES.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "graphdist/decision.hpp"
#include "graphdist/error.hpp"
#include "graphdist/geometry.hpp"
#include "graphdist/graph.hpp"

namespace graphdist {

struct CriticalValue {
  double value = 0.0;
  CriticalType type = CriticalType::kVertexEdge;
  std::string provenance;  // e.g. "v3|e(1,2)" in G1/G2 ids
};

struct CriticalValueSet {
  std::vector<CriticalValue> values;  // strictly increasing
  std::size_t raw_count = 0;          // before deduplication
};

namespace detail {

inline std::string edge_tag(const EmbeddedGraph& g, std::size_t e) {
  return "e(" + std::to_string(g.id(g.edge(e).u)) + "," + std::to_string(g.id(g.edge(e).v)) + ")";
}

inline std::string vertex_tag(const EmbeddedGraph& g, std::size_t v) { return "v" + std::to_string(g.id(v)); }

}  // namespace detail

/// Candidate values of all three kinds, sorted, deduplicated at relative
/// 1e-12, zero excluded. Provenance names the G1 element first.
inline CriticalValueSet critical_values(const EmbeddedGraph& g1, const EmbeddedGraph& g2) {
  std::vector<CriticalValue> raw;
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    const Point2 p = g1.position(v);
    for (std::size_t f = 0; f < g2.edge_count(); ++f) {
      const auto c = critical_vertex_edge(p, g2.segment(f));
      raw.push_back({c.value, c.type, detail::vertex_tag(g1, v) + "|" + detail::edge_tag(g2, f)});
    }
    for (std::size_t w = 0; w < g2.vertex_count(); ++w) {
      const auto c = critical_vertex_vertex(p, g2.position(w));
      raw.push_back({c.value, c.type, detail::vertex_tag(g1, v) + "|" + detail::vertex_tag(g2, w)});
    }
  }
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    const Segment s = g1.segment(e);
    for (std::size_t w = 0; w < g2.vertex_count(); ++w) {
      const auto c = critical_point_edge(g2.position(w), s);
      raw.push_back({c.value, c.type, detail::edge_tag(g1, e) + "|" + detail::vertex_tag(g2, w)});
      for (std::size_t w2 = w + 1; w2 < g2.vertex_count(); ++w2) {
        if (auto b = critical_bisector(g2.position(w), g2.position(w2), s)) {
          raw.push_back({b->value, b->type,
                         detail::edge_tag(g1, e) + "|" + detail::vertex_tag(g2, w) + "," + detail::vertex_tag(g2, w2)});
        }
      }
    }
  }
  CriticalValueSet set;
  set.raw_count = raw.size();
  std::stable_sort(raw.begin(), raw.end(),
                   [](const CriticalValue& a, const CriticalValue& b) { return a.value < b.value; });
  for (auto& c : raw) {
    if (!(c.value > 0.0)) continue;
    if (!set.values.empty()) {
      const double prev = set.values.back().value;
      if (c.value - prev <= 1e-12 * std::max(std::abs(prev), std::abs(c.value))) continue;
    }
    set.values.push_back(std::move(c));
  }
  return set;
}

enum class Direction { kOneToTwo, kTwoToOne };

inline const char* to_string(Direction d) { return d == Direction::kOneToTwo ? "1to2" : "2to1"; }

struct DistanceResult {
  double value = 0.0;
  Mode mode = Mode::kStrong;
  Direction direction = Direction::kOneToTwo;
  std::optional<CriticalValue> deciding_critical;
  std::size_t decisions_made = 0;
  std::size_t candidate_count = 0;
};

/// Same edge set up to orientation and geometric tolerance.
inline bool same_geometry(const EmbeddedGraph& a, const EmbeddedGraph& b, double tol = 1e-9) {
  if (a.edge_count() != b.edge_count()) return false;
  std::vector<bool> used(b.edge_count(), false);
  for (std::size_t e = 0; e < a.edge_count(); ++e) {
    const Segment s = a.segment(e);
    bool found = false;
    for (std::size_t f = 0; f < b.edge_count() && !found; ++f) {
      if (used[f]) continue;
      const Segment t = b.segment(f);
      const bool fwd = distance(s.a, t.a) <= tol && distance(s.b, t.b) <= tol;
      const bool rev = distance(s.a, t.b) <= tol && distance(s.b, t.a) <= tol;
      if (fwd || rev) {
        used[f] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// Directed distance by binary search over the critical values. The first
/// probe at half the smallest candidate detects distance zero; a graph that
/// never maps (G2 without edges) yields +infinity.
inline DistanceResult compute_distance(const EmbeddedGraph& g1_in, const EmbeddedGraph& g2_in, Mode mode,
                                       Direction dir = Direction::kOneToTwo, const DecideOptions& opt = {}) {
  const EmbeddedGraph& g1 = dir == Direction::kOneToTwo ? g1_in : g2_in;
  const EmbeddedGraph& g2 = dir == Direction::kOneToTwo ? g2_in : g1_in;
  DistanceResult res;
  res.mode = mode;
  res.direction = dir;
  if (g1.edge_count() > 0 && same_geometry(g1, g2) && is_plane(g1) && is_plane(g2)) {
    res.value = 0.0;
    return res;
  }
  const CriticalValueSet cs = critical_values(g1, g2);
  res.candidate_count = cs.values.size();
  auto decide = [&](double eps) {
    ++res.decisions_made;
    try {
      return decide_directed(g1, g2, eps, mode, opt).yes();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudgetExceeded) throw Error(ErrorCode::kUndecidable, e.what());
      throw;
    }
  };
  if (cs.values.empty()) {
    res.value = decide(0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    return res;
  }
  if (decide(0.5 * cs.values.front().value)) {
    res.value = 0.0;
    return res;
  }
  std::size_t lo = 0, hi = cs.values.size();  // first YES lies in [lo, hi]; hi means none
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (decide(cs.values[mid].value)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (lo == cs.values.size()) {
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }
  res.value = cs.values[lo].value;
  res.deciding_critical = cs.values[lo];
  return res;
}

struct UndirectedResult {
  double value = 0.0;
  DistanceResult forward;   // 1 -> 2
  DistanceResult backward;  // 2 -> 1
  Direction binding = Direction::kOneToTwo;
};

inline UndirectedResult compute_undirected(const EmbeddedGraph& g1, const EmbeddedGraph& g2, Mode mode,
                                           const DecideOptions& opt = {}) {
  UndirectedResult r;
  r.forward = compute_distance(g1, g2, mode, Direction::kOneToTwo, opt);
  r.backward = compute_distance(g1, g2, mode, Direction::kTwoToOne, opt);
  r.binding = r.backward.value > r.forward.value ? Direction::kTwoToOne : Direction::kOneToTwo;
  r.value = std::max(r.forward.value, r.backward.value);
  return r;
}

}  // namespace graphdist
