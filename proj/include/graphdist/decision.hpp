#pragma once

// Deciding whether G1 maps into G2 within eps: per component pair, compute
// and prune placements, then pick one placement per vertex so that every
// edge joins reachable placements. Includes witness construction and an
// independent-style verifier for mappings.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graphdist/error.hpp"
#include "graphdist/frechet.hpp"
#include "graphdist/geometry.hpp"
#include "graphdist/graph.hpp"
#include "graphdist/placements.hpp"

namespace graphdist {

enum class Strategy { kAuto, kTree, kPlaneWeak, kPlaneStrongChord, kBruteForce };
enum class Answer { kYes, kNo, kYesApprox };
enum class Method { kEmptyPlacement, kUniquePlacement, kTree, kPlaneWeak, kPlaneStrongChord, kBruteForce, kApprox };

inline const char* to_string(Answer a) {
  switch (a) {
    case Answer::kYes: return "YES";
    case Answer::kNo: return "NO";
    case Answer::kYesApprox: return "YES_APPROX";
  }
  return "?";
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::kEmptyPlacement: return "empty-placement";
    case Method::kUniquePlacement: return "unique-placement";
    case Method::kTree: return "tree";
    case Method::kPlaneWeak: return "plane-weak";
    case Method::kPlaneStrongChord: return "plane-strong-chord";
    case Method::kBruteForce: return "brute-force";
    case Method::kApprox: return "approx";
  }
  return "?";
}

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::kAuto: return "auto";
    case Strategy::kTree: return "tree";
    case Strategy::kPlaneWeak: return "plane_weak";
    case Strategy::kPlaneStrongChord: return "plane_strong_chord";
    case Strategy::kBruteForce: return "brute_force";
  }
  return "?";
}

inline std::optional<Strategy> parse_strategy(const std::string& s) {
  for (Strategy x : {Strategy::kAuto, Strategy::kTree, Strategy::kPlaneWeak, Strategy::kPlaneStrongChord,
                     Strategy::kBruteForce}) {
    if (s == to_string(x)) return x;
  }
  return std::nullopt;
}

/// Witness mapping. Keys are G1 vertex ids and canonical G1 edges (lower id
/// first); every edge path runs from the lower-id endpoint's image to the
/// other. Point edge indices refer to the full G2.
struct GraphMapping {
  std::map<VertexId, PointOnGraph> vertex_images;
  std::map<std::pair<VertexId, VertexId>, std::vector<PointOnGraph>> edge_images;
};

struct ComponentReport {
  std::vector<VertexId> vertices;
  bool passed = false;
  Method method = Method::kEmptyPlacement;
  std::optional<std::size_t> g2_component;
  std::map<VertexId, std::size_t> survivors;
};

struct DecisionOutcome {
  Answer answer = Answer::kNo;
  Method method = Method::kEmptyPlacement;
  std::optional<GraphMapping> witness;
  std::optional<double> approx_factor;
  std::string notes;
  std::vector<ComponentReport> components;
  std::size_t expansions = 0;

  bool yes() const { return answer != Answer::kNo; }
};

struct DecideOptions {
  Strategy strategy = Strategy::kAuto;
  bool require_witness = false;  // skip the witness-free plane-weak shortcut
  std::size_t node_budget = 10'000'000;
  std::size_t combination_cap = 10'000'000;
  double slack = 1e-9;
};

/// One placement index per G1 vertex (of a component subgraph).
using Assignment = std::vector<std::size_t>;

namespace detail {

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

// Compatibility of two placements along the G1 edge joining x and y.
struct Compat {
  const EmbeddedGraph& g1;
  const ReachabilityIndex& idx;
  bool operator()(std::size_t x, std::size_t px, std::size_t y, std::size_t py) const {
    const auto e = g1.find_edge(x, y);
    return e && idx.reachable(*e, x, px, y, py);
  }
};

inline std::vector<std::size_t> alive_indices(const std::vector<VertexPlacement>& ps) {
  std::vector<std::size_t> out;
  for (const auto& p : ps) {
    if (p.alive) out.push_back(p.index);
  }
  return out;
}

// Extends a partial assignment in BFS order, giving each new vertex the
// first surviving placement compatible with every assigned neighbor. After
// pruning this never fails when each new vertex has one assigned neighbor.
inline bool greedy_extend(const EmbeddedGraph& g1, const PlacementTable& table, const ReachabilityIndex& idx,
                          Assignment& assign) {
  const Compat compat{g1, idx};
  auto choose = [&](std::size_t y) {
    for (std::size_t py : alive_indices(table[y])) {
      bool ok = true;
      for (const auto& inc : g1.neighbors(y)) {
        const std::size_t z = inc.neighbor;
        if (assign[z] != kUnassigned && !compat(y, py, z, assign[z])) {
          ok = false;
          break;
        }
      }
      if (ok) {
        assign[y] = py;
        return true;
      }
    }
    return false;
  };
  std::deque<std::size_t> queue;
  auto drain = [&]() {
    while (!queue.empty()) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (const auto& inc : g1.neighbors(x)) {
        const std::size_t y = inc.neighbor;
        if (assign[y] != kUnassigned) continue;
        if (!choose(y)) return false;
        queue.push_back(y);
      }
    }
    return true;
  };
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    if (assign[v] != kUnassigned) queue.push_back(v);
  }
  if (!drain()) return false;
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    if (assign[v] != kUnassigned) continue;
    if (!choose(v)) return false;
    queue.push_back(v);
    if (!drain()) return false;
  }
  return true;
}

inline bool assignment_consistent(const EmbeddedGraph& g1, const ReachabilityIndex& idx, const Assignment& a) {
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    const auto& ed = g1.edge(e);
    if (!idx.reachable(e, ed.u, a[ed.u], ed.v, a[ed.v])) return false;
  }
  return true;
}

}  // namespace detail

/// Exhaustive search over surviving placements with forward checking.
/// Variables are ordered most-constrained first, preferring vertices next to
/// already ordered ones. Throws BudgetExceeded past `node_budget` nodes.
inline std::optional<Assignment> solve_brute_force(const EmbeddedGraph& g1, const PlacementTable& table,
                                                   const ReachabilityIndex& idx, std::size_t node_budget,
                                                   std::size_t* nodes_out = nullptr) {
  const std::size_t n = g1.vertex_count();
  std::vector<std::vector<std::size_t>> domain(n);
  for (std::size_t v = 0; v < n; ++v) {
    domain[v] = detail::alive_indices(table[v]);
    if (domain[v].empty()) return std::nullopt;
  }
  std::vector<std::size_t> order;
  std::vector<bool> placed(n, false);
  std::vector<std::size_t> links(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = detail::kUnassigned;
    for (std::size_t v = 0; v < n; ++v) {
      if (placed[v]) continue;
      if (best == detail::kUnassigned || links[v] > links[best] ||
          (links[v] == links[best] && domain[v].size() < domain[best].size())) {
        best = v;
      }
    }
    placed[best] = true;
    order.push_back(best);
    for (const auto& inc : g1.neighbors(best)) ++links[inc.neighbor];
  }

  const detail::Compat compat{g1, idx};
  Assignment assign(n, detail::kUnassigned);
  std::size_t nodes = 0;
  std::function<bool(std::size_t, std::vector<std::vector<std::size_t>>&)> search =
      [&](std::size_t depth, std::vector<std::vector<std::size_t>>& dom) -> bool {
    if (depth == n) return true;
    const std::size_t x = order[depth];
    for (std::size_t px : dom[x]) {
      if (++nodes > node_budget) throw Error(ErrorCode::kBudgetExceeded, "brute-force node budget exhausted");
      assign[x] = px;
      std::vector<std::vector<std::size_t>> next = dom;
      bool wiped = false;
      for (const auto& inc : g1.neighbors(x)) {
        const std::size_t y = inc.neighbor;
        if (assign[y] != detail::kUnassigned) continue;
        auto& dy = next[y];
        dy.erase(std::remove_if(dy.begin(), dy.end(), [&](std::size_t py) { return !compat(x, px, y, py); }),
                 dy.end());
        if (dy.empty()) {
          wiped = true;
          break;
        }
      }
      if (!wiped && search(depth + 1, next)) return true;
      assign[x] = detail::kUnassigned;
    }
    return false;
  };
  const bool found = search(0, domain);
  if (nodes_out) *nodes_out = nodes;
  if (!found) return std::nullopt;
  return assign;
}

namespace detail {

// A relation over G1 vertices (sorted) holding placement tuples, with
// back-pointers for reconstructing a full assignment.
struct Relation {
  std::vector<std::size_t> vars;
  std::vector<std::vector<std::uint32_t>> tuples;
  std::vector<std::pair<std::size_t, std::size_t>> from;                      // join nodes
  std::vector<std::vector<std::pair<std::size_t, std::uint32_t>>> full;        // leaves
};

struct PlanNode {
  enum Kind { kWalk, kEdge, kJoin } kind = kWalk;
  std::vector<std::size_t> walk;  // kWalk: closed walk; kEdge: the two endpoints
  std::size_t left = 0, right = 0;
  std::set<std::size_t> vars;      // every G1 vertex below
  std::vector<std::size_t> iface;  // vertices shared with the rest of the plan
};

class ChordSolver {
 public:
  ChordSolver(const EmbeddedGraph& g1, const PlacementTable& table, const ReachabilityIndex& idx, std::size_t cap)
      : g1_(g1), table_(table), compat_{g1, idx}, cap_(cap) {}

  std::optional<std::vector<std::pair<std::size_t, std::uint32_t>>> solve(std::vector<PlanNode> plan,
                                                                         std::size_t root) {
    plan_ = std::move(plan);
    // Interface: vertices below a node that also occur in a leaf elsewhere.
    std::map<std::size_t, std::size_t> total;
    for (const PlanNode& n : plan_) {
      if (n.kind == PlanNode::kJoin) continue;
      for (std::size_t v : std::set<std::size_t>(n.walk.begin(), n.walk.end())) ++total[v];
    }
    std::function<std::map<std::size_t, std::size_t>(std::size_t)> count = [&](std::size_t id) {
      PlanNode& n = plan_[id];
      std::map<std::size_t, std::size_t> below;
      if (n.kind == PlanNode::kJoin) {
        for (auto& [v, c] : count(n.left)) below[v] += c;
        for (auto& [v, c] : count(n.right)) below[v] += c;
      } else {
        for (std::size_t v : std::set<std::size_t>(n.walk.begin(), n.walk.end())) below[v] = 1;
      }
      n.iface.clear();
      for (auto& [v, c] : below) {
        if (c < total[v]) n.iface.push_back(v);
      }
      return below;
    };
    count(root);
    rel_.assign(plan_.size(), {});
    evaluate(root);
    if (rel_[root].tuples.empty()) return std::nullopt;
    std::vector<std::pair<std::size_t, std::uint32_t>> out;
    reconstruct(root, 0, out);
    return out;
  }

 private:
  void charge(std::size_t k) {
    used_ += k;
    if (used_ > cap_) throw Error(ErrorCode::kBudgetExceeded, "chord decomposition combination store exhausted");
  }

  std::vector<std::size_t> domain(std::size_t v) const { return alive_indices(table_[v]); }

  void evaluate(std::size_t id) {
    const PlanNode& n = plan_[id];
    if (n.kind == PlanNode::kJoin) {
      evaluate(n.left);
      evaluate(n.right);
      join(id);
    } else if (n.kind == PlanNode::kEdge) {
      edge_leaf(id);
    } else {
      walk_leaf(id);
    }
  }

  void emit_leaf(Relation& r, const std::vector<std::size_t>& iface,
                 std::map<std::vector<std::uint32_t>, std::size_t>& seen,
                 const std::vector<std::pair<std::size_t, std::uint32_t>>& assignment) {
    std::vector<std::uint32_t> key;
    for (std::size_t v : iface) {
      for (const auto& [x, val] : assignment) {
        if (x == v) {
          key.push_back(val);
          break;
        }
      }
    }
    if (seen.emplace(key, r.tuples.size()).second) {
      r.tuples.push_back(std::move(key));
      r.full.push_back(assignment);
      charge(1);
    }
  }

  void edge_leaf(std::size_t id) {
    const PlanNode& n = plan_[id];
    Relation& r = rel_[id];
    r.vars = n.iface;
    std::map<std::vector<std::uint32_t>, std::size_t> seen;
    const std::size_t a = n.walk[0], b = n.walk[1];
    for (std::size_t pa : domain(a)) {
      for (std::size_t pb : domain(b)) {
        if (compat_(a, pa, b, pb)) {
          emit_leaf(r, n.iface, seen, {{a, static_cast<std::uint32_t>(pa)}, {b, static_cast<std::uint32_t>(pb)}});
        }
      }
    }
  }

  // Chains reachability around a closed walk. The state keeps the values of
  // anchor vertices (interface or repeated) and of the current vertex.
  void walk_leaf(std::size_t id) {
    const PlanNode& n = plan_[id];
    std::vector<std::size_t> w = n.walk;
    // Start at an interface vertex when there is one.
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::binary_search(n.iface.begin(), n.iface.end(), w[i])) {
        std::rotate(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i), w.end());
        break;
      }
    }
    const std::size_t k = w.size();
    std::map<std::size_t, std::size_t> occurrences;
    for (std::size_t v : w) ++occurrences[v];
    std::vector<std::size_t> anchors;  // order of first appearance
    std::map<std::size_t, std::size_t> anchor_pos;
    for (std::size_t v : w) {
      const bool anchor = v == w[0] || occurrences[v] > 1 || std::binary_search(n.iface.begin(), n.iface.end(), v);
      if (anchor && !anchor_pos.count(v)) {
        anchor_pos[v] = anchors.size();
        anchors.push_back(v);
      }
    }
    struct State {
      std::vector<std::uint32_t> anchor_vals;
      std::uint32_t cur;
      std::size_t parent;
    };
    std::vector<std::vector<State>> layers(k);
    for (std::size_t p : domain(w[0])) {
      layers[0].push_back({{static_cast<std::uint32_t>(p)}, static_cast<std::uint32_t>(p), 0});
    }
    charge(layers[0].size());
    for (std::size_t i = 1; i < k; ++i) {
      const std::size_t x = w[i - 1], y = w[i];
      std::map<std::vector<std::uint32_t>, std::size_t> seen;
      const auto ap = anchor_pos.find(y);
      for (std::size_t s = 0; s < layers[i - 1].size(); ++s) {
        const State& st = layers[i - 1][s];
        for (std::size_t py : domain(y)) {
          if (ap != anchor_pos.end() && ap->second < st.anchor_vals.size() && st.anchor_vals[ap->second] != py) continue;
          if (!compat_(x, st.cur, y, py)) continue;
          State next{st.anchor_vals, static_cast<std::uint32_t>(py), s};
          if (ap != anchor_pos.end() && ap->second == next.anchor_vals.size()) next.anchor_vals.push_back(next.cur);
          std::vector<std::uint32_t> key = next.anchor_vals;
          key.push_back(next.cur);
          if (seen.emplace(std::move(key), layers[i].size()).second) layers[i].push_back(std::move(next));
        }
      }
      charge(layers[i].size());
      if (layers[i].empty()) break;
    }
    Relation& r = rel_[id];
    r.vars = n.iface;
    std::map<std::vector<std::uint32_t>, std::size_t> seen;
    for (std::size_t s = 0; s < layers[k - 1].size(); ++s) {
      const State& st = layers[k - 1][s];
      if (!compat_(w[k - 1], st.cur, w[0], st.anchor_vals[0])) continue;
      std::vector<std::pair<std::size_t, std::uint32_t>> assignment;
      std::size_t at = s;
      for (std::size_t i = k; i-- > 0;) {
        const State& cs = layers[i][at];
        assignment.emplace_back(w[i], cs.cur);
        at = cs.parent;
      }
      std::sort(assignment.begin(), assignment.end());
      assignment.erase(std::unique(assignment.begin(), assignment.end()), assignment.end());
      emit_leaf(r, n.iface, seen, assignment);
    }
  }

  void join(std::size_t id) {
    const PlanNode& n = plan_[id];
    const Relation& a = rel_[n.left];
    const Relation& b = rel_[n.right];
    Relation& r = rel_[id];
    r.vars = n.iface;
    std::vector<std::size_t> shared;
    std::set_intersection(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(), std::back_inserter(shared));
    auto pos = [](const std::vector<std::size_t>& vars, std::size_t v) -> std::ptrdiff_t {
      auto it = std::lower_bound(vars.begin(), vars.end(), v);
      return (it != vars.end() && *it == v) ? it - vars.begin() : -1;
    };
    std::map<std::vector<std::uint32_t>, std::vector<std::size_t>> index;
    for (std::size_t t = 0; t < b.tuples.size(); ++t) {
      std::vector<std::uint32_t> key;
      for (std::size_t v : shared) key.push_back(b.tuples[t][static_cast<std::size_t>(pos(b.vars, v))]);
      index[key].push_back(t);
    }
    std::map<std::vector<std::uint32_t>, std::size_t> seen;
    for (std::size_t s = 0; s < a.tuples.size(); ++s) {
      std::vector<std::uint32_t> key;
      for (std::size_t v : shared) key.push_back(a.tuples[s][static_cast<std::size_t>(pos(a.vars, v))]);
      auto it = index.find(key);
      if (it == index.end()) continue;
      for (std::size_t t : it->second) {
        std::vector<std::uint32_t> out;
        for (std::size_t v : r.vars) {
          const auto pa = pos(a.vars, v);
          out.push_back(pa >= 0 ? a.tuples[s][static_cast<std::size_t>(pa)]
                                : b.tuples[t][static_cast<std::size_t>(pos(b.vars, v))]);
        }
        if (seen.emplace(out, r.tuples.size()).second) {
          r.tuples.push_back(std::move(out));
          r.from.emplace_back(s, t);
          charge(1);
        }
      }
    }
  }

  void reconstruct(std::size_t id, std::size_t tuple, std::vector<std::pair<std::size_t, std::uint32_t>>& out) const {
    const PlanNode& n = plan_[id];
    if (n.kind == PlanNode::kJoin) {
      reconstruct(n.left, rel_[id].from[tuple].first, out);
      reconstruct(n.right, rel_[id].from[tuple].second, out);
    } else {
      const auto& f = rel_[id].full[tuple];
      out.insert(out.end(), f.begin(), f.end());
    }
  }

  const EmbeddedGraph& g1_;
  const PlacementTable& table_;
  Compat compat_;
  std::size_t cap_;
  std::size_t used_ = 0;
  std::vector<PlanNode> plan_;
  std::vector<Relation> rel_;
};

}  // namespace detail

/// Exact strong decision for a plane G1 component through its chord
/// decomposition. Pendant trees are peeled first; after pruning every
/// surviving root placement extends over its tree, so trees only need a
/// greedy pass at the end. Needs pruned placements and the reachability
/// index of the same component pair.
inline std::optional<Assignment> solve_chord_dp(const EmbeddedGraph& g1, const PlacementTable& table,
                                                const ReachabilityIndex& idx,
                                                std::size_t combination_cap = 10'000'000) {
  Assignment assign(g1.vertex_count(), detail::kUnassigned);
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    if (detail::alive_indices(table[v]).empty()) return std::nullopt;
  }
  const PeelResult peel = peel_tree_substructures(g1);
  if (peel.core.graph.edge_count() > 0) {
    const EmbeddedGraph& core = peel.core.graph;
    const DecompositionTree dt = chord_decomposition(core);
    std::vector<detail::PlanNode> plan;
    auto to_parent = [&](std::size_t c) { return peel.core.vertex_parent[c]; };
    std::function<std::size_t(std::size_t)> convert = [&](std::size_t id) -> std::size_t {
      const auto& node = dt.nodes[id];
      detail::PlanNode p;
      if (node.leaf) {
        p.kind = detail::PlanNode::kWalk;
        for (std::size_t c : node.cycle) p.walk.push_back(to_parent(c));
        p.vars.insert(p.walk.begin(), p.walk.end());
      } else {
        p.kind = detail::PlanNode::kJoin;
        p.left = convert(node.left);
        p.right = convert(node.right);
        p.vars = plan[p.left].vars;
        p.vars.insert(plan[p.right].vars.begin(), plan[p.right].vars.end());
      }
      plan.push_back(std::move(p));
      return plan.size() - 1;
    };
    std::size_t root = convert(dt.root);
    // Bridge edges join the plan one at a time, preferring ones that touch
    // what is already covered.
    std::vector<std::size_t> bridges = dt.bridge_edges;
    while (!bridges.empty()) {
      std::size_t pick = 0;
      for (std::size_t i = 0; i < bridges.size(); ++i) {
        const auto& ce = core.edge(bridges[i]);
        if (plan[root].vars.count(to_parent(ce.u)) || plan[root].vars.count(to_parent(ce.v))) {
          pick = i;
          break;
        }
      }
      const auto& ce = core.edge(bridges[pick]);
      bridges.erase(bridges.begin() + static_cast<std::ptrdiff_t>(pick));
      detail::PlanNode leaf;
      leaf.kind = detail::PlanNode::kEdge;
      leaf.walk = {to_parent(ce.u), to_parent(ce.v)};
      leaf.vars.insert(leaf.walk.begin(), leaf.walk.end());
      plan.push_back(leaf);
      detail::PlanNode j;
      j.kind = detail::PlanNode::kJoin;
      j.left = root;
      j.right = plan.size() - 1;
      j.vars = plan[root].vars;
      j.vars.insert(leaf.vars.begin(), leaf.vars.end());
      plan.push_back(std::move(j));
      root = plan.size() - 1;
    }
    detail::ChordSolver solver(g1, table, idx, combination_cap);
    const auto sol = solver.solve(std::move(plan), root);
    if (!sol) return std::nullopt;
    for (const auto& [v, p] : *sol) assign[v] = p;
  }
  if (!detail::greedy_extend(g1, table, idx, assign)) return std::nullopt;
  if (!detail::assignment_consistent(g1, idx, assign)) return std::nullopt;
  return assign;
}

namespace detail {

inline bool covers(const std::vector<MaybeInterval>& allowed, const EmbeddedGraph& g, std::size_t f, std::size_t w) {
  if (!allowed[f]) return false;
  return g.edge(f).u == w ? allowed[f]->lo <= 0.0 : allowed[f]->hi >= 1.0;
}

// Shortest hop path between two points through the parts of G2 allowed by
// per-edge parameter ranges. Each range must be a single interval that
// contains the points lying on its edge.
inline std::optional<std::vector<PointOnGraph>> route(const EmbeddedGraph& g, const std::vector<MaybeInterval>& allowed,
                                                      const PointOnGraph& from, const PointOnGraph& to) {
  if (same_point(g, from, to)) return std::vector<PointOnGraph>{from};
  const auto fv = vertex_at(g, from), tv = vertex_at(g, to);
  auto on_edge = [&](const PointOnGraph& p, std::optional<std::size_t> pv, std::size_t f) {
    return pv ? (g.edge(f).u == *pv || g.edge(f).v == *pv) : p.edge == f;
  };
  // Direct along a single edge.
  if (!fv && on_edge(to, tv, from.edge)) return std::vector<PointOnGraph>{from, to};
  if (!tv && on_edge(from, fv, to.edge)) return std::vector<PointOnGraph>{from, to};

  const std::size_t n = g.vertex_count();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> parent(n, kNone);
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  auto start = [&](std::size_t w) {
    if (!seen[w]) {
      seen[w] = true;
      queue.push_back(w);
    }
  };
  if (fv) {
    start(*fv);
  } else {
    for (std::size_t w : {g.edge(from.edge).u, g.edge(from.edge).v}) {
      if (covers(allowed, g, from.edge, w)) start(w);
    }
  }
  auto is_target = [&](std::size_t w) {
    if (tv) return w == *tv;
    return (g.edge(to.edge).u == w || g.edge(to.edge).v == w) && covers(allowed, g, to.edge, w);
  };
  std::optional<std::size_t> hit;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    if (is_target(x)) {
      hit = x;
      break;
    }
    for (const auto& inc : g.neighbors(x)) {
      const std::size_t f = inc.edge;
      if (!allowed[f] || allowed[f]->lo > 0.0 || allowed[f]->hi < 1.0) continue;
      if (!seen[inc.neighbor]) {
        seen[inc.neighbor] = true;
        parent[inc.neighbor] = x;
        queue.push_back(inc.neighbor);
      }
    }
  }
  if (!hit) return std::nullopt;
  std::vector<std::size_t> chain;
  for (std::size_t w = *hit; w != kNone; w = parent[w]) chain.push_back(w);
  std::reverse(chain.begin(), chain.end());
  std::vector<PointOnGraph> path;
  if (!fv) path.push_back(from);
  for (std::size_t w : chain) path.push_back(on_vertex(g, w));
  if (!tv) path.push_back(to);
  return path;
}

// Edge of G2 carrying the step a -> b, if any.
inline std::optional<std::size_t> common_edge(const EmbeddedGraph& g, const PointOnGraph& a, const PointOnGraph& b) {
  const auto va = vertex_at(g, a), vb = vertex_at(g, b);
  if (va && vb) return g.find_edge(*va, *vb);
  if (!va && !vb) return a.edge == b.edge ? std::optional<std::size_t>(a.edge) : std::nullopt;
  const PointOnGraph& inner = va ? b : a;
  const std::size_t w = va ? *va : *vb;
  const auto& ed = g.edge(inner.edge);
  if (ed.u == w || ed.v == w) return inner.edge;
  return std::nullopt;
}

inline double param_on(const EmbeddedGraph& g, const PointOnGraph& p, std::size_t f) {
  if (p.edge == f) return p.t;
  const auto w = vertex_at(g, p);
  return g.edge(f).u == *w ? 0.0 : 1.0;
}

struct Step {
  std::size_t edge;
  double from, to;
};

inline std::vector<Step> steps_of(const EmbeddedGraph& g, const std::vector<PointOnGraph>& path) {
  std::vector<Step> steps;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto f = common_edge(g, path[i], path[i + 1]);
    if (!f) throw Error(ErrorCode::kMalformedMapping, "consecutive path points do not share an edge");
    steps.push_back({*f, param_on(g, path[i], *f), param_on(g, path[i + 1], *f)});
  }
  return steps;
}

// A point shared by steps i and j (j > i) other than the joint of two
// consecutive steps; preferring the one earliest along step i.
inline std::optional<PointOnGraph> shared_point(const EmbeddedGraph& g, const Step& a, const Step& b, bool consecutive) {
  if (a.edge == b.edge) {
    const double lo = std::max(std::min(a.from, a.to), std::min(b.from, b.to));
    const double hi = std::min(std::max(a.from, a.to), std::max(b.from, b.to));
    if (lo > hi) return std::nullopt;
    if (consecutive && hi - lo <= 1e-12) return std::nullopt;
    const double t = a.from <= a.to ? lo : hi;
    return canonical_point(g, a.edge, t);
  }
  // Different edges meet at most at a common vertex.
  for (std::size_t w : {g.edge(a.edge).u, g.edge(a.edge).v}) {
    const auto& eb = g.edge(b.edge);
    if (eb.u != w && eb.v != w) continue;
    const double ta = g.edge(a.edge).u == w ? 0.0 : 1.0;
    const double tb = eb.u == w ? 0.0 : 1.0;
    const bool in_a = ta >= std::min(a.from, a.to) && ta <= std::max(a.from, a.to);
    const bool in_b = tb >= std::min(b.from, b.to) && tb <= std::max(b.from, b.to);
    if (!in_a || !in_b) continue;
    if (consecutive && ta == a.to && tb == b.from) continue;
    return on_vertex(g, w);
  }
  return std::nullopt;
}

inline std::vector<PointOnGraph> dedupe(const EmbeddedGraph& g, const std::vector<PointOnGraph>& path) {
  std::vector<PointOnGraph> out;
  for (const auto& p : path) {
    if (out.empty() || !same_point(g, out.back(), p)) out.push_back(p);
  }
  return out;
}

}  // namespace detail

/// Removes loops from a path on G2. Cutting at a repeated point keeps the
/// strong Frechet distance to a segment within eps: the skipped part of the
/// segment has both ends within eps of that point, hence all of it.
inline std::vector<PointOnGraph> remove_loops(const EmbeddedGraph& g, std::vector<PointOnGraph> path) {
  path = detail::dedupe(g, path);
  while (path.size() > 2) {
    const auto steps = detail::steps_of(g, path);
    bool cut = false;
    for (std::size_t i = 0; i < steps.size() && !cut; ++i) {
      for (std::size_t j = steps.size(); j-- > i + 1;) {
        const auto x = detail::shared_point(g, steps[i], steps[j], j == i + 1);
        if (!x) continue;
        std::vector<PointOnGraph> next(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i + 1));
        next.push_back(*x);
        next.insert(next.end(), path.begin() + static_cast<std::ptrdiff_t>(j + 1), path.end());
        path = detail::dedupe(g, next);
        cut = true;
        break;
      }
    }
    if (!cut) break;
  }
  return path;
}

inline bool is_simple_path(const EmbeddedGraph& g, const std::vector<PointOnGraph>& path) {
  const auto steps = detail::steps_of(g, detail::dedupe(g, path));
  for (std::size_t i = 0; i < steps.size(); ++i) {
    for (std::size_t j = i + 1; j < steps.size(); ++j) {
      if (detail::shared_point(g, steps[i], steps[j], j == i + 1)) return false;
    }
  }
  return true;
}

namespace detail {

inline std::vector<MaybeInterval> placement_ranges(const EmbeddedGraph& g2, const VertexPlacement& p) {
  std::vector<MaybeInterval> allowed(g2.edge_count());
  for (const Portion& q : p.portions) allowed[q.edge] = q.range;
  return allowed;
}

}  // namespace detail

/// Witness for a consistent assignment, in the indices of the graphs given.
/// Vertex images are placement representatives. Strong edge paths are the
/// stored exploration paths extended inside both placements; weak paths are
/// routed through the tube. Both are then made simple.
inline GraphMapping build_witness(const EmbeddedGraph& g1, const EmbeddedGraph& g2, const PlacementTable& table,
                                  const ReachabilityIndex& idx, const Assignment& assign) {
  GraphMapping m;
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    m.vertex_images[g1.id(v)] = table[v][assign[v]].representative;
  }
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    const auto& ed = g1.edge(e);
    const VertexPlacement& cu = table[ed.u][assign[ed.u]];
    const VertexPlacement& cv = table[ed.v][assign[ed.v]];
    const EdgeReachability& r = idx.edges[e];
    std::vector<PointOnGraph> path;
    if (idx.mode == Mode::kStrong) {
      const auto it = r.witness.find({cu.index, cv.index});
      if (it == r.witness.end()) throw Error(ErrorCode::kWitnessUnavailable, "no stored path for an assigned pair");
      const auto& mid = it->second;
      const auto head = detail::route(g2, detail::placement_ranges(g2, cu), cu.representative, mid.front());
      const auto tail = detail::route(g2, detail::placement_ranges(g2, cv), mid.back(), cv.representative);
      if (!head || !tail) throw Error(ErrorCode::kWitnessUnavailable, "placement is not connected");
      path = *head;
      path.insert(path.end(), mid.begin() + 1, mid.end());
      path.insert(path.end(), tail->begin() + 1, tail->end());
    } else {
      const auto p = detail::route(g2, r.tube, cu.representative, cv.representative);
      if (!p) throw Error(ErrorCode::kWitnessUnavailable, "placements are not connected inside the tube");
      path = *p;
    }
    m.edge_images[{g1.id(ed.u), g1.id(ed.v)}] = remove_loops(g2, path);
  }
  return m;
}

struct EdgeCheck {
  std::pair<VertexId, VertexId> edge;
  bool ok = false;
  bool simple = false;
  double value = 0.0;  // strong or weak Frechet distance of the image
};

struct VerifyReport {
  bool ok = false;
  std::vector<EdgeCheck> edges;
  std::optional<std::pair<VertexId, VertexId>> worst_edge;
  double worst_value = 0.0;
};

/// Checks a mapping: vertex images on G2,
/// edge images simple paths with matching endpoints, and per-edge (weak)
/// Frechet distance at most eps (+ slack).
inline VerifyReport verify_mapping(const EmbeddedGraph& g1, const EmbeddedGraph& g2, const GraphMapping& m,
                                   double eps, Mode mode, double slack = 1e-9) {
  auto valid_point = [&](const PointOnGraph& p) {
    return p.edge < g2.edge_count() && p.t >= 0.0 && p.t <= 1.0 && std::isfinite(p.t);
  };
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    const auto it = m.vertex_images.find(g1.id(v));
    if (it == m.vertex_images.end()) {
      throw Error(ErrorCode::kMalformedMapping, "vertex " + std::to_string(g1.id(v)) + " has no image");
    }
    if (!valid_point(it->second)) {
      throw Error(ErrorCode::kMalformedMapping, "vertex " + std::to_string(g1.id(v)) + " image is not on G2");
    }
  }
  VerifyReport rep;
  rep.ok = true;
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    const auto& ed = g1.edge(e);
    const std::pair<VertexId, VertexId> key{g1.id(ed.u), g1.id(ed.v)};
    const std::string name = "(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
    const auto it = m.edge_images.find(key);
    if (it == m.edge_images.end() || it->second.empty()) {
      throw Error(ErrorCode::kMalformedMapping, "edge " + name + " has no image");
    }
    const auto& path = it->second;
    for (const auto& p : path) {
      if (!valid_point(p)) throw Error(ErrorCode::kMalformedMapping, "edge " + name + " leaves G2");
    }
    if (!same_point(g2, path.front(), m.vertex_images.at(key.first)) ||
        !same_point(g2, path.back(), m.vertex_images.at(key.second))) {
      throw Error(ErrorCode::kMalformedMapping, "edge " + name + " image does not end at its vertex images");
    }
    EdgeCheck c;
    c.edge = key;
    c.simple = is_simple_path(g2, path);  // throws on disconnected steps
    Polyline poly;
    for (const auto& p : path) poly.pts.push_back(position(g2, p));
    const Segment s = g1.segment(e);
    if (mode == Mode::kStrong) {
      c.value = strong_value_segment_path(s, poly);
      c.ok = strong_decide_segment_path(s, poly, eps + slack);
    } else {
      c.value = weak_value_segment_path(s, poly);
      c.ok = c.value <= eps + slack;
    }
    c.ok = c.ok && c.simple;
    rep.ok = rep.ok && c.ok;
    if (!rep.worst_edge || c.value > rep.worst_value) {
      rep.worst_edge = key;
      rep.worst_value = c.value;
    }
    rep.edges.push_back(c);
  }
  return rep;
}

namespace detail {

inline GraphMapping lift_mapping(const GraphMapping& local, const SubGraph& sub2) {
  GraphMapping out;
  auto lift = [&](const PointOnGraph& p) { return PointOnGraph{sub2.edge_parent[p.edge], p.t}; };
  for (const auto& [v, p] : local.vertex_images) out.vertex_images[v] = lift(p);
  for (const auto& [e, path] : local.edge_images) {
    auto& dst = out.edge_images[e];
    for (const auto& p : path) dst.push_back(lift(p));
  }
  return out;
}

inline std::size_t face_count(const EmbeddedGraph& g) { return faces(g).faces.size(); }

struct Attempt {
  bool pass = false;
  Method method = Method::kEmptyPlacement;
  std::optional<GraphMapping> mapping;
  std::map<VertexId, std::size_t> survivors;
  std::size_t expansions = 0;
};

inline Attempt attempt_pair(const SubGraph& s1, const SubGraph& s2, double eps_eff, Mode mode,
                            const DecideOptions& opt) {
  const EmbeddedGraph& g1 = s1.graph;
  const EmbeddedGraph& g2 = s2.graph;
  Attempt at;
  if (g1.edge_count() == 0) {
    // A lone vertex maps to any point of G2; take the nearest one.
    at.pass = true;
    at.method = Method::kTree;
    GraphMapping m;
    double best = std::numeric_limits<double>::infinity();
    PointOnGraph img;
    for (std::size_t f = 0; f < g2.edge_count(); ++f) {
      const double t = closest_parameter(g1.position(0), g2.segment(f));
      const double d = distance(g1.position(0), g2.segment(f).at(t));
      if (d < best) {
        best = d;
        img = canonical_point(g2, f, t);
      }
    }
    m.vertex_images[g1.id(0)] = img;
    at.mapping = lift_mapping(m, s2);
    at.survivors[g1.id(0)] = 1;
    return at;
  }

  PlacementTable table = compute_placements(g1, g2, eps_eff);
  const ReachabilityIndex idx = compute_reachability(g1, g2, table, eps_eff, mode);
  at.expansions = idx.expansions;
  const PruneReport pr = prune_invalid(table, idx, g1);
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) at.survivors[g1.id(v)] = pr.survivors[v];
  if (std::any_of(pr.survivors.begin(), pr.survivors.end(), [](std::size_t c) { return c == 0; })) {
    at.method = Method::kEmptyPlacement;
    return at;
  }

  const bool tree = is_tree(g1);
  const bool both_plane = is_plane(g1) && is_plane(g2);
  auto finish = [&](std::optional<Assignment> a, Method method) {
    at.method = method;
    at.pass = a.has_value();
    if (a) at.mapping = lift_mapping(build_witness(g1, g2, table, idx, *a), s2);
    return at;
  };
  auto greedy = [&]() -> std::optional<Assignment> {
    Assignment a(g1.vertex_count(), kUnassigned);
    if (greedy_extend(g1, table, idx, a) && assignment_consistent(g1, idx, a)) return a;
    return std::nullopt;
  };

  switch (opt.strategy) {
    case Strategy::kTree:
      if (!tree) throw Error(ErrorCode::kStrategyInapplicable, "tree strategy on a component with a cycle");
      return finish(greedy(), Method::kTree);
    case Strategy::kPlaneWeak:
      if (mode != Mode::kWeak || !both_plane) {
        throw Error(ErrorCode::kStrategyInapplicable, "plane_weak needs weak mode and plane graphs");
      }
      at.method = Method::kPlaneWeak;
      at.pass = true;
      return at;
    case Strategy::kPlaneStrongChord:
      if (mode != Mode::kStrong || !both_plane) {
        throw Error(ErrorCode::kStrategyInapplicable, "plane_strong_chord needs strong mode and plane graphs");
      }
      return finish(solve_chord_dp(g1, table, idx, opt.combination_cap), Method::kPlaneStrongChord);
    case Strategy::kBruteForce:
      return finish(solve_brute_force(g1, table, idx, opt.node_budget), Method::kBruteForce);
    case Strategy::kAuto:
      break;
  }

  bool unique = true;
  for (std::size_t v = 0; v < g1.vertex_count(); ++v) {
    if (g1.degree(v) >= 2 && pr.survivors[v] != 1) unique = false;
  }
  if (unique) {
    if (auto a = greedy()) return finish(a, Method::kUniquePlacement);
  }
  if (tree) {
    if (auto a = greedy()) return finish(a, Method::kTree);
  }
  if (mode == Mode::kWeak && both_plane && !opt.require_witness) {
    at.method = Method::kPlaneWeak;
    at.pass = true;
    return at;
  }
  if (mode == Mode::kStrong && both_plane) {
    const std::size_t f = face_count(g1);
    if (2 * f - 1 <= g1.vertex_count()) {
      return finish(solve_chord_dp(g1, table, idx, opt.combination_cap), Method::kPlaneStrongChord);
    }
  }
  return finish(solve_brute_force(g1, table, idx, opt.node_budget), Method::kBruteForce);
}

}  // namespace detail

/// Does G1 map into G2 with every edge within eps (strong or weak)?
inline DecisionOutcome decide_directed(const EmbeddedGraph& g1, const EmbeddedGraph& g2, double eps, Mode mode,
                                       const DecideOptions& opt = {}) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::kPreconditionViolated, "eps must be finite and >= 0");
  const double eps_eff = eps + opt.slack;
  DecisionOutcome out;
  out.answer = Answer::kYes;
  out.method = Method::kUniquePlacement;
  GraphMapping witness;
  bool have_witness = true;

  std::vector<SubGraph> comps2;
  const auto c2 = component_vertex_indices(g2);
  for (const auto& c : c2) {
    SubGraph s = make_subgraph(g2, c);
    comps2.push_back(std::move(s));
  }
  bool first = true;
  for (const auto& c : component_vertex_indices(g1)) {
    const SubGraph s1 = make_subgraph(g1, c);
    ComponentReport rep;
    for (std::size_t v : c) rep.vertices.push_back(g1.id(v));
    std::optional<detail::Attempt> last;
    for (std::size_t k = 0; k < comps2.size(); ++k) {
      if (comps2[k].graph.edge_count() == 0) continue;
      detail::Attempt at = detail::attempt_pair(s1, comps2[k], eps_eff, mode, opt);
      out.expansions += at.expansions;
      const bool pass = at.pass;
      if (pass) rep.g2_component = k;
      last = std::move(at);
      if (pass) break;
    }
    if (last) {
      rep.passed = last->pass;
      rep.method = last->method;
      rep.survivors = last->survivors;
    }
    if (rep.passed) {
      if (last->mapping) {
        witness.vertex_images.insert(last->mapping->vertex_images.begin(), last->mapping->vertex_images.end());
        witness.edge_images.insert(last->mapping->edge_images.begin(), last->mapping->edge_images.end());
      } else {
        have_witness = false;
      }
      if (out.answer == Answer::kYes && (first || static_cast<int>(rep.method) > static_cast<int>(out.method))) {
        out.method = rep.method;
      }
      first = false;
    } else if (out.answer == Answer::kYes) {
      out.answer = Answer::kNo;
      out.method = rep.method;
    }
    out.components.push_back(std::move(rep));
  }
  if (out.answer == Answer::kYes && have_witness) out.witness = std::move(witness);
  if (out.answer == Answer::kYes && !have_witness) out.notes = "plane-weak: existence only, no witness";
  return out;
}

struct ApproxParams {
  double alpha = 0.0;
  bool balls_disjoint = false;
};

/// Half the smallest angle between consecutive incident edges over vertices
/// of degree at least three; nullopt when there is no such vertex.
inline std::optional<double> branch_angle(const EmbeddedGraph& g) {
  std::optional<double> best;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) < 3) continue;
    std::vector<double> ang;
    for (const auto& inc : g.neighbors(v)) {
      const Point2 d = g.position(inc.neighbor) - g.position(v);
      ang.push_back(std::atan2(d.y, d.x));
    }
    std::sort(ang.begin(), ang.end());
    double gap = ang.front() + 2.0 * std::numbers::pi - ang.back();
    for (std::size_t i = 1; i < ang.size(); ++i) gap = std::min(gap, ang[i] - ang[i - 1]);
    if (!best || gap < *best) best = gap;
  }
  if (!best) return std::nullopt;
  return 0.5 * *best;
}

inline ApproxParams approx_params(const EmbeddedGraph& g1, double eps) {
  ApproxParams p;
  p.alpha = branch_angle(g1).value_or(0.0);
  p.balls_disjoint = true;
  for (std::size_t e = 0; e < g1.edge_count(); ++e) {
    if (g1.segment(e).length() <= 2.0 * eps) p.balls_disjoint = false;
  }
  return p;
}

/// Approximate strong decision for plane inputs with disjoint vertex balls:
/// NO is exact; otherwise the distance is at most eps / sin(alpha).
/// Components without a branch vertex are decided exactly.
inline DecisionOutcome decide_approx_strong_plane(const EmbeddedGraph& g1, const EmbeddedGraph& g2, double eps,
                                                  const DecideOptions& opt = {}) {
  if (!is_plane(g1) || !is_plane(g2)) throw Error(ErrorCode::kPreconditionViolated, "both graphs must be plane");
  const ApproxParams ap = approx_params(g1, eps);
  if (!ap.balls_disjoint) throw Error(ErrorCode::kPreconditionViolated, "balls around adjacent vertices overlap");
  if (!branch_angle(g1)) throw Error(ErrorCode::kNoBranchVertex, "no vertex of degree three or more");
  const double eps_eff = eps + opt.slack;

  DecisionOutcome out;
  out.answer = Answer::kYesApprox;
  out.method = Method::kApprox;
  out.approx_factor = 1.0 / std::sin(ap.alpha);
  std::vector<SubGraph> comps2;
  for (const auto& c : component_vertex_indices(g2)) comps2.push_back(make_subgraph(g2, c));
  for (const auto& c : component_vertex_indices(g1)) {
    const SubGraph s1 = make_subgraph(g1, c);
    ComponentReport rep;
    for (std::size_t v : c) rep.vertices.push_back(g1.id(v));
    const bool branch = branch_angle(s1.graph).has_value();
    rep.method = branch ? Method::kApprox : Method::kEmptyPlacement;
    for (std::size_t k = 0; k < comps2.size() && !rep.passed; ++k) {
      if (comps2[k].graph.edge_count() == 0) continue;
      if (!branch) {
        DecideOptions o = opt;
        o.strategy = Strategy::kAuto;
        const detail::Attempt at = detail::attempt_pair(s1, comps2[k], eps_eff, Mode::kStrong, o);
        rep.passed = at.pass;
        rep.method = at.method;
        rep.survivors = at.survivors;
      } else {
        PlacementTable table = compute_placements(s1.graph, comps2[k].graph, eps_eff);
        const ReachabilityIndex idx = compute_reachability(s1.graph, comps2[k].graph, table, eps_eff, Mode::kStrong);
        out.expansions += idx.expansions;
        const PruneReport pr = prune_invalid(table, idx, s1.graph);
        rep.survivors.clear();
        for (std::size_t v = 0; v < s1.graph.vertex_count(); ++v) rep.survivors[s1.graph.id(v)] = pr.survivors[v];
        rep.passed = std::none_of(pr.survivors.begin(), pr.survivors.end(), [](std::size_t x) { return x == 0; });
      }
      if (rep.passed) rep.g2_component = k;
    }
    if (!rep.passed) {
      out.answer = Answer::kNo;
      out.method = rep.method == Method::kApprox ? Method::kEmptyPlacement : rep.method;
      out.approx_factor.reset();
    }
    out.components.push_back(std::move(rep));
  }
  return out;
}

}  // namespace graphdist
