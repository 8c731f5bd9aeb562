#pragma once

// Brute-force reference decision for tiny instances. It shares only the
// graph container with the production code: placements, paths and curve
// checks are recomputed here in the simplest possible way, and curve
// distances are certified by sampling with an explicit error bound.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "graphdist/graph.hpp"
#include "graphdist/placements.hpp"

namespace graphdist {

enum class OracleStatus { kYes, kNo, kNearCritical, kBudget };

inline const char* to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::kYes: return "YES";
    case OracleStatus::kNo: return "NO";
    case OracleStatus::kNearCritical: return "NEAR_CRITICAL";
    case OracleStatus::kBudget: return "BUDGET";
  }
  return "?";
}

struct OracleBudget {
  std::size_t max_assignments = 1'000'000;
  std::size_t max_paths_per_edge = 100'000;
  double near_critical_margin = 1e-6;
  double min_step = 2e-4;  // finest sampling step, relative to max(1, curve length)
};

namespace oracle_detail {

struct P {
  double x, y;
};

inline double dist(P a, P b) { return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)); }
inline P lerp(P a, P b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }

inline double seg_dist(P p, P a, P b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double l2 = dx * dx + dy * dy;
  double t = l2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / l2 : 0.0;
  t = t < 0 ? 0 : (t > 1 ? 1 : t);
  return dist(p, lerp(a, b, t));
}

inline double closest_t(P p, P a, P b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double l2 = dx * dx + dy * dy;
  double t = l2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / l2 : 0.0;
  return t < 0 ? 0 : (t > 1 ? 1 : t);
}

// A point on G2: edge index and parameter, or a vertex.
struct Loc {
  std::size_t edge;
  double t;
};

struct Instance {
  std::vector<P> v1, v2;
  std::vector<std::pair<std::size_t, std::size_t>> e1, e2;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj2;  // (neighbor, edge)
};

inline Instance make_instance(const EmbeddedGraph& g1, const EmbeddedGraph& g2) {
  Instance in;
  for (const auto& v : g1.vertices()) in.v1.push_back({v.pos.x, v.pos.y});
  for (const auto& v : g2.vertices()) in.v2.push_back({v.pos.x, v.pos.y});
  for (const auto& e : g1.edges()) in.e1.emplace_back(e.u, e.v);
  for (const auto& e : g2.edges()) in.e2.emplace_back(e.u, e.v);
  in.adj2.resize(in.v2.size());
  for (std::size_t f = 0; f < in.e2.size(); ++f) {
    in.adj2[in.e2[f].first].emplace_back(in.e2[f].second, f);
    in.adj2[in.e2[f].second].emplace_back(in.e2[f].first, f);
  }
  return in;
}

// Placement: set of G2 edges reaching into the ball, joined through G2
// vertices inside the ball; anchored at its nearest point to the center.
struct Place {
  std::vector<std::size_t> edges;
  Loc nearest;
};

inline std::vector<Place> places(const Instance& in, P c, double eps) {
  const std::size_t m = in.e2.size();
  std::vector<bool> hit(m, false);
  for (std::size_t f = 0; f < m; ++f) {
    hit[f] = seg_dist(c, in.v2[in.e2[f].first], in.v2[in.e2[f].second]) <= eps;
  }
  std::vector<int> label(m, -1);
  std::vector<Place> out;
  for (std::size_t s = 0; s < m; ++s) {
    if (!hit[s] || label[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.push_back({});
    std::vector<std::size_t> stack{s};
    label[s] = id;
    while (!stack.empty()) {
      const std::size_t f = stack.back();
      stack.pop_back();
      out.back().edges.push_back(f);
      for (std::size_t w : {in.e2[f].first, in.e2[f].second}) {
        if (dist(in.v2[w], c) > eps) continue;
        for (const auto& [nb, g] : in.adj2[w]) {
          if (hit[g] && label[g] < 0) {
            label[g] = id;
            stack.push_back(g);
          }
        }
      }
    }
    double best = std::numeric_limits<double>::infinity();
    std::sort(out.back().edges.begin(), out.back().edges.end());
    for (std::size_t f : out.back().edges) {
      const P a = in.v2[in.e2[f].first], b = in.v2[in.e2[f].second];
      const double t = closest_t(c, a, b);
      const double d = dist(c, lerp(a, b, t));
      if (d < best) {
        best = d;
        out.back().nearest = {f, t};
      }
    }
  }
  return out;
}

inline P at(const Instance& in, Loc l) { return lerp(in.v2[in.e2[l.edge].first], in.v2[in.e2[l.edge].second], l.t); }

// Samples a polyline so consecutive samples are at most h apart.
inline std::vector<P> sample(const std::vector<P>& poly, double h) {
  std::vector<P> out{poly.front()};
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const double len = dist(poly[i], poly[i + 1]);
    const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / h)));
    for (std::size_t j = 1; j <= k; ++j) out.push_back(lerp(poly[i], poly[i + 1], static_cast<double>(j) / k));
  }
  return out;
}

// Discrete decisions on sample sequences: monotone couplings (strong) or
// arbitrary grid walks (weak), both from (0,0) to (n-1,m-1).
inline bool discrete_strong(const std::vector<P>& a, const std::vector<P>& b, double eps) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<char> prev(m, 0), cur(m, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const bool free = dist(a[i], b[j]) <= eps;
      bool reach = false;
      if (i == 0 && j == 0) {
        reach = true;
      } else {
        if (i > 0 && prev[j]) reach = true;
        if (j > 0 && cur[j - 1]) reach = true;
        if (i > 0 && j > 0 && prev[j - 1]) reach = true;
      }
      cur[j] = free && reach;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1] != 0;
}

inline bool discrete_weak(const std::vector<P>& a, const std::vector<P>& b, double eps) {
  const std::size_t n = a.size(), m = b.size();
  if (dist(a[0], b[0]) > eps) return false;
  std::vector<char> seen(n * m, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    const std::size_t i = c / m, j = c % m;
    if (i == n - 1 && j == m - 1) return true;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
        if (ii < 0 || jj < 0 || ii >= static_cast<long>(n) || jj >= static_cast<long>(m)) continue;
        const std::size_t k = static_cast<std::size_t>(ii) * m + static_cast<std::size_t>(jj);
        if (seen[k] || dist(a[static_cast<std::size_t>(ii)], b[static_cast<std::size_t>(jj)]) > eps) continue;
        seen[k] = 1;
        stack.push_back(k);
      }
    }
  }
  return false;
}

enum class Verdict { kYes, kNo, kUnsure };

// Curve check of segment (a,b) against a path. Sampling at step h gives
// d <= sampled <= d + h, so a sampled YES at eps or a sampled NO at eps + h
// is certain; otherwise the step is halved down to a floor.
inline Verdict curve_check(P a, P b, const std::vector<P>& path, double eps, bool strong, double min_step) {
  if (dist(a, path.front()) > eps || dist(b, path.back()) > eps) return Verdict::kNo;
  for (const P& q : path) {
    if (seg_dist(q, a, b) > eps) return Verdict::kNo;
  }
  double len = dist(a, b);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) len = std::max(len, dist(path[i], path[i + 1]));
  const double floor = min_step * std::max(1.0, len);
  for (double h = std::max(eps, len) / 4.0; h >= floor; h /= 2.0) {
    const auto sa = sample({a, b}, h);
    const auto sb = sample(path, h);
    const bool ok = strong ? discrete_strong(sa, sb, eps) : discrete_weak(sa, sb, eps);
    if (ok) return Verdict::kYes;
    const bool ok_wide = strong ? discrete_strong(sa, sb, eps + h) : discrete_weak(sa, sb, eps + h);
    if (!ok_wide) return Verdict::kNo;
    if (h <= 1e-300) break;
  }
  return Verdict::kUnsure;
}

// Own critical values for the near-critical guard.
inline std::vector<double> own_criticals(const Instance& in) {
  std::vector<double> c;
  for (const P& v : in.v1) {
    for (const auto& [a, b] : in.e2) c.push_back(seg_dist(v, in.v2[a], in.v2[b]));
    for (const P& w : in.v2) c.push_back(dist(v, w));
  }
  for (const auto& [ia, ib] : in.e1) {
    const P a = in.v1[ia], b = in.v1[ib];
    for (std::size_t i = 0; i < in.v2.size(); ++i) {
      c.push_back(seg_dist(in.v2[i], a, b));
      for (std::size_t j = i + 1; j < in.v2.size(); ++j) {
        // Point on ab equidistant to both vertices.
        const P p = in.v2[i], q = in.v2[j];
        const double fa = dist(a, p) * dist(a, p) - dist(a, q) * dist(a, q);
        const double fb = dist(b, p) * dist(b, p) - dist(b, q) * dist(b, q);
        if ((fa > 0 && fb > 0) || (fa < 0 && fb < 0) || fa == fb) continue;
        const double t = fa / (fa - fb);
        c.push_back(dist(lerp(a, b, t), p));
      }
    }
  }
  return c;
}

}  // namespace oracle_detail

/// Reference decision by enumerating every placement assignment and every
/// simple G2 path per edge.
inline OracleStatus oracle_decide(const EmbeddedGraph& g1, const EmbeddedGraph& g2, double eps, Mode mode,
                                  const OracleBudget& budget = {}) {
  using namespace oracle_detail;
  const Instance in = make_instance(g1, g2);
  for (double c : own_criticals(in)) {
    if (std::abs(c - eps) < budget.near_critical_margin) return OracleStatus::kNearCritical;
  }
  const std::size_t n1 = in.v1.size();
  if (in.e2.empty()) return n1 == 0 ? OracleStatus::kYes : OracleStatus::kNo;

  std::vector<std::size_t> degree(n1, 0);
  for (const auto& [a, b] : in.e1) {
    ++degree[a];
    ++degree[b];
  }
  // Isolated G1 vertices have no constraint; everyone else needs a placement.
  std::vector<std::vector<Place>> pl(n1);
  for (std::size_t v = 0; v < n1; ++v) {
    if (degree[v] == 0) continue;
    pl[v] = places(in, in.v1[v], eps);
    if (pl[v].empty()) return OracleStatus::kNo;
  }
  const bool strong = mode == Mode::kStrong;

  bool budget_hit = false;
  bool unsure = false;
  // Cache per (G1 edge, placement of first endpoint, placement of second).
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Verdict> cache;
  auto edge_ok = [&](std::size_t e, std::size_t ca, std::size_t cb) -> Verdict {
    const auto key = std::make_tuple(e, ca, cb);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const auto [ia, ib] = in.e1[e];
    const P a = in.v1[ia], b = in.v1[ib];
    const Loc s = pl[ia][ca].nearest, t = pl[ib][cb].nearest;
    const P ps = at(in, s), pt = at(in, t);
    Verdict result = Verdict::kNo;
    std::size_t paths = 0;
    auto test = [&](const std::vector<P>& poly) {
      ++paths;
      const Verdict v = curve_check(a, b, poly, eps, strong, budget.min_step);
      if (v == Verdict::kYes) result = Verdict::kYes;
      if (v == Verdict::kUnsure && result == Verdict::kNo) result = Verdict::kUnsure;
    };
    if (s.edge == t.edge) test({ps, pt});
    // Through G2 vertices: leave s's edge at one end, walk a simple vertex
    // path, enter t's edge at one end.
    const auto& es = in.e2[s.edge];
    const auto& et = in.e2[t.edge];
    std::vector<bool> on(in.v2.size(), false);
    std::vector<P> poly{ps};
    std::function<void(std::size_t)> dfs = [&](std::size_t w) {
      if (result == Verdict::kYes || paths > budget.max_paths_per_edge) return;
      if (seg_dist(in.v2[w], a, b) > eps) return;
      on[w] = true;
      poly.push_back(in.v2[w]);
      if (w == et.first || w == et.second) {
        auto closed = poly;
        closed.push_back(pt);
        test(closed);
      }
      for (const auto& [nb, f] : in.adj2[w]) {
        if (!on[nb]) dfs(nb);
      }
      poly.pop_back();
      on[w] = false;
    };
    dfs(es.first);
    dfs(es.second);
    if (paths > budget.max_paths_per_edge && result != Verdict::kYes) {
      budget_hit = true;
      result = Verdict::kUnsure;
    }
    cache[key] = result;
    return result;
  };

  std::vector<std::size_t> order;
  for (std::size_t v = 0; v < n1; ++v) {
    if (degree[v] > 0) order.push_back(v);
  }
  std::vector<std::size_t> choice(n1, 0);
  std::size_t assignments = 0;
  bool found = false;
  // Odometer over all assignments.
  while (true) {
    if (++assignments > budget.max_assignments) return OracleStatus::kBudget;
    bool all_yes = true;
    bool any_no = false;
    for (std::size_t e = 0; e < in.e1.size(); ++e) {
      const Verdict v = edge_ok(e, choice[in.e1[e].first], choice[in.e1[e].second]);
      if (v == Verdict::kNo) {
        any_no = true;
        break;
      }
      if (v == Verdict::kUnsure) all_yes = false;
    }
    if (!any_no && all_yes) {
      found = true;
      break;
    }
    if (!any_no) unsure = true;
    std::size_t k = 0;
    while (k < order.size()) {
      const std::size_t v = order[k];
      if (++choice[v] < pl[v].size()) break;
      choice[v] = 0;
      ++k;
    }
    if (k == order.size()) break;
  }
  if (found) return OracleStatus::kYes;
  if (budget_hit) return OracleStatus::kBudget;
  if (unsure) return OracleStatus::kNearCritical;
  return OracleStatus::kNo;
}

}  // namespace graphdist
