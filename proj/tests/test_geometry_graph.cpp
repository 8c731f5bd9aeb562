#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "support.hpp"

using namespace gdtest;

namespace {

constexpr double kTol = 1e-9;

// geometry

TEST(Geometry, PointSegmentDistance) {
  const Segment s{{-1, 0}, {1, 0}};
  EXPECT_NEAR(point_segment_distance({0, 1}, s), 1.0, kTol);
  EXPECT_NEAR(point_segment_distance({2, 0}, s), 1.0, kTol);
  EXPECT_NEAR(point_segment_distance({3, 4}, Segment{{0, 0}, {0, 0}}), 5.0, kTol);
}

TEST(Geometry, FreeInterval) {
  auto iv = free_interval({{0, 0}, {10, 0}}, {5, 1}, std::sqrt(2.0));
  ASSERT_TRUE(iv);
  // (10t - 5)^2 + 1 <= 2  <=>  t in [0.4, 0.6]
  EXPECT_NEAR(iv->lo, 0.4, 1e-12);
  EXPECT_NEAR(iv->hi, 0.6, 1e-12);

  iv = free_interval({{0, 0}, {1, 0}}, {0, 0}, 2.0);
  ASSERT_TRUE(iv);
  EXPECT_EQ(*iv, (Interval{0.0, 1.0}));

  EXPECT_FALSE(free_interval({{0, 0}, {1, 0}}, {0, 5}, 1.0));
}

TEST(Geometry, ClipSegmentToDisk) {
  auto iv = clip_segment_to_disk({{-2, 0}, {2, 0}}, {0, 0}, 1.0);
  ASSERT_TRUE(iv);
  EXPECT_NEAR(iv->lo, 0.25, 1e-12);
  EXPECT_NEAR(iv->hi, 0.75, 1e-12);
  EXPECT_FALSE(clip_segment_to_disk({{5, 5}, {6, 6}}, {0, 0}, 1.0));
  iv = clip_segment_to_disk({{0, 0}, {1, 0}}, {0.5, 0}, 10.0);
  ASSERT_TRUE(iv);
  EXPECT_EQ(*iv, (Interval{0.0, 1.0}));
}

TEST(Geometry, ClipSegmentToTube) {
  const Segment e{{0, 0}, {2, 0}};
  const Segment s{{-1, 0.5}, {3, 0.5}};
  auto iv = clip_segment_to_tube(s, e, 1.0);
  ASSERT_TRUE(iv);
  // caps: x = -sqrt(3)/2 and 2 + sqrt(3)/2
  EXPECT_NEAR(s.at(iv->lo).x, -std::sqrt(3.0) / 2, 1e-9);
  EXPECT_NEAR(s.at(iv->hi).x, 2 + std::sqrt(3.0) / 2, 1e-9);

  EXPECT_FALSE(clip_segment_to_tube({{0, 3}, {2, 3}}, e, 1.0));
  iv = clip_segment_to_tube(e, e, 1.0);
  ASSERT_TRUE(iv);
  EXPECT_EQ(*iv, (Interval{0.0, 1.0}));
}

TEST(Geometry, CriticalCandidates) {
  EXPECT_NEAR(critical_vertex_vertex({0, 0}, {3, 4}).value, 5.0, kTol);
  EXPECT_EQ(critical_vertex_vertex({0, 0}, {3, 4}).type, CriticalType::kVertexVertex);
  EXPECT_NEAR(critical_vertex_edge({0, 2}, {{-1, 0}, {1, 0}}).value, 2.0, kTol);
  EXPECT_NEAR(critical_point_edge({5, 0}, {{0, 0}, {2, 0}}).value, 3.0, kTol);

  auto b = critical_bisector({0, 1}, {2, 1}, {{0, 0}, {2, 0}});
  ASSERT_TRUE(b);
  EXPECT_NEAR(b->value, std::sqrt(2.0), 1e-12);
  EXPECT_EQ(b->type, CriticalType::kFreeSpace);
  EXPECT_FALSE(critical_bisector({0, 1}, {0, 3}, {{0, 0}, {2, 0}}));
}

TEST(GeometryProperty, FreeIntervalMatchesDistance) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const Segment e{rng.point(-3, 3), rng.point(-3, 3)};
    if (e.length() < 1e-3) continue;
    const Point2 w = rng.point(-4, 4);
    const double eps = rng.uniform(0.01, 3.0);
    const double d = point_segment_distance(w, e);
    if (std::abs(d - eps) < 1e-9) continue;
    EXPECT_EQ(free_interval(e, w, eps).has_value(), d <= eps) << i;
  }
}

TEST(GeometryProperty, TubeClipIsOneInterval) {
  Rng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const Segment s{rng.point(-3, 3), rng.point(-3, 3)};
    const Segment e{rng.point(-3, 3), rng.point(-3, 3)};
    if (s.length() < 1e-3 || e.length() < 1e-3) continue;
    const double eps = rng.uniform(0.05, 2.0);
    const auto iv = clip_segment_to_tube(s, e, eps);
    // Every sample inside the tube lies in the interval and vice versa.
    for (int k = 0; k <= 50; ++k) {
      const double t = k / 50.0;
      const double d = point_segment_distance(s.at(t), e);
      if (std::abs(d - eps) < 1e-6) continue;
      const bool in = iv && iv->contains(t, 1e-9);
      ASSERT_EQ(in, d < eps) << "case " << i << " t " << t;
    }
  }
}

TEST(GeometryProperty, FreeIntervalMonotoneInEps) {
  Rng rng(13);
  for (int i = 0; i < 5000; ++i) {
    const Segment e{rng.point(-3, 3), rng.point(-3, 3)};
    if (e.length() < 1e-3) continue;
    const Point2 w = rng.point(-3, 3);
    const double e1 = rng.uniform(0.01, 2.0), e2 = e1 + rng.uniform(0.0, 2.0);
    const auto a = free_interval(e, w, e1), b = free_interval(e, w, e2);
    if (!a) continue;
    ASSERT_TRUE(b);
    EXPECT_LE(b->lo, a->lo + 1e-12);
    EXPECT_GE(b->hi, a->hi - 1e-12);
  }
}

TEST(GeometryProperty, RigidMotionInvariance) {
  Rng rng(14);
  for (int i = 0; i < 2000; ++i) {
    const Segment s{rng.point(-3, 3), rng.point(-3, 3)};
    const Segment e{rng.point(-3, 3), rng.point(-3, 3)};
    if (s.length() < 1e-2 || e.length() < 1e-2) continue;
    const Point2 w = rng.point(-3, 3);
    const double eps = rng.uniform(0.1, 2.0);
    const double ang = rng.uniform(0, 2 * std::numbers::pi);
    const Point2 sh = rng.point(-10, 10);
    auto m = [&](Point2 p) { return rigid(p, ang, sh); };
    const Segment ms{m(s.a), m(s.b)}, me{m(e.a), m(e.b)};
    EXPECT_NEAR(point_segment_distance(w, e), point_segment_distance(m(w), me), 1e-9);
    const auto a = free_interval(e, w, eps), b = free_interval(me, m(w), eps);
    ASSERT_EQ(a.has_value(), b.has_value());
    if (a) {
      EXPECT_NEAR(a->lo, b->lo, 1e-7);
      EXPECT_NEAR(a->hi, b->hi, 1e-7);
    }
    const auto c = clip_segment_to_tube(s, e, eps), d = clip_segment_to_tube(ms, me, eps);
    if (c && d) {
      EXPECT_NEAR(c->lo, d->lo, 1e-6);
      EXPECT_NEAR(c->hi, d->hi, 1e-6);
    }
  }
}

// graph

TEST(Graph, Validate) {
  const auto g = make_graph({{0, 0, 0}, {1, 1, 0}}, {{0, 1}});
  EXPECT_EQ(g.vertex_count(), 2u);
  EXPECT_EQ(g.edge_count(), 1u);

  auto code_of = [](const RawGraph& raw) -> std::optional<ErrorCode> {
    try {
      EmbeddedGraph::validate(raw);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  EXPECT_EQ(code_of({{{0, 0, 0}, {1, 0, 0}}, {{0, 1}}}), ErrorCode::kDegenerateEdge);
  EXPECT_EQ(code_of({{{0, 0, 0}, {0, 1, 0}}, {}}), ErrorCode::kDuplicateId);
  EXPECT_EQ(code_of({{{0, 0, 0}}, {{0, 0}}}), ErrorCode::kSelfLoop);
  EXPECT_EQ(code_of({{{0, std::nan(""), 0}}, {}}), ErrorCode::kNonFinite);
}

TEST(Graph, ConnectedComponents) {
  const auto two = make_graph({{0, 0, 0}, {1, 1, 0}, {2, 0, 1}, {3, 1, 1}}, {{0, 1}, {2, 3}});
  EXPECT_EQ(connected_components(two).size(), 2u);
  const auto path = path_graph({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  EXPECT_EQ(connected_components(path).size(), 1u);
  EXPECT_EQ(connected_components(EmbeddedGraph::validate({})).size(), 0u);
}

TEST(Graph, IsPlane) {
  EXPECT_TRUE(is_plane(unit_square()));
  EXPECT_FALSE(is_plane(make_graph({{0, 0, 0}, {1, 1, 1}, {2, 1, 0}, {3, 0, 1}}, {{0, 1}, {2, 3}})));
  // K4 drawn on a convex quadrilateral: both diagonals cross.
  const auto k4 = make_graph({{0, 0, 0}, {1, 1, 0}, {2, 1, 1}, {3, 0, 1}},
                             {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}, {1, 3}});
  EXPECT_FALSE(is_plane(k4));
  // Pairwise segment test as the oracle.
  bool crossing = false;
  for (std::size_t a = 0; a < k4.edge_count(); ++a)
    for (std::size_t b = a + 1; b < k4.edge_count(); ++b) {
      const auto ea = k4.edge(a), eb = k4.edge(b);
      if (ea.u == eb.u || ea.u == eb.v || ea.v == eb.u || ea.v == eb.v) continue;
      crossing = crossing || segments_intersect(k4.segment(a), k4.segment(b));
    }
  EXPECT_TRUE(crossing);
  // Collinear overlapping edges sharing an endpoint.
  EXPECT_FALSE(is_plane(make_graph({{0, 0, 0}, {1, 2, 0}, {2, 1, 0}}, {{0, 1}, {0, 2}})));
}

EmbeddedGraph theta() { return load_fixture("theta.json"); }

EmbeddedGraph grid(int k, double step = 1.0) {
  RawGraph raw;
  auto id = [&](int i, int j) { return static_cast<VertexId>(i * (k + 1) + j); };
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) raw.vertices.push_back({id(i, j), j * step, i * step});
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      if (j < k) raw.edges.emplace_back(id(i, j), id(i, j + 1));
      if (i < k) raw.edges.emplace_back(id(i, j), id(i + 1, j));
    }
  return EmbeddedGraph::validate(raw);
}

TEST(Graph, Faces) {
  EXPECT_EQ(faces(unit_square()).faces.size(), 2u);
  EXPECT_EQ(faces(theta()).faces.size(), 3u);
  EXPECT_EQ(faces(path_graph({{0, 0}, {1, 0}, {1, 1}})).faces.size(), 1u);
  const FaceSet fs = faces(unit_square());
  EXPECT_LE(fs.faces[fs.outer_face_index].signed_area, 0.0);

  try {
    faces(make_graph({{0, 0, 0}, {1, 1, 0}, {2, 5, 5}, {3, 6, 5}}, {{0, 1}, {2, 3}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotConnected);
  }
  try {
    faces(make_graph({{0, 0, 0}, {1, 1, 1}, {2, 1, 0}, {3, 0, 1}}, {{0, 1}, {2, 3}, {1, 2}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPlane);
  }
}

std::set<std::pair<VertexId, VertexId>> edge_ids(const EmbeddedGraph& g) {
  std::set<std::pair<VertexId, VertexId>> out;
  for (const auto& e : g.edges()) out.insert(std::minmax(g.id(e.u), g.id(e.v)));
  return out;
}

std::set<std::pair<VertexId, VertexId>> reassemble(const PeelResult& r) {
  auto out = edge_ids(r.core.graph);
  for (const auto& t : r.trees) {
    const auto te = edge_ids(t.tree.graph);
    out.insert(te.begin(), te.end());
  }
  return out;
}

TEST(Graph, PeelTreeSubstructures) {
  const auto tree = path_graph({{0, 0}, {1, 0}, {2, 1}, {3, 0}});
  auto r = peel_tree_substructures(tree);
  EXPECT_LE(r.core.graph.vertex_count(), 1u);
  EXPECT_EQ(r.core.graph.edge_count(), 0u);
  ASSERT_EQ(r.trees.size(), 1u);
  EXPECT_EQ(edge_ids(r.trees[0].tree.graph), edge_ids(tree));

  const auto lolly = make_graph({{0, 0, 0}, {1, 1, 0}, {2, 1, 1}, {3, 0, 1}, {4, 2, 1}, {5, 3, 1}},
                                {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {2, 4}, {4, 5}});
  r = peel_tree_substructures(lolly);
  EXPECT_EQ(edge_ids(r.core.graph), edge_ids(unit_square()));
  ASSERT_EQ(r.trees.size(), 1u);
  EXPECT_EQ(r.trees[0].root, 2);
  EXPECT_EQ(r.trees[0].tree.graph.edge_count(), 2u);

  r = peel_tree_substructures(theta());
  EXPECT_EQ(edge_ids(r.core.graph), edge_ids(theta()));
  EXPECT_TRUE(r.trees.empty());
}

TEST(Graph, ChordDecomposition) {
  auto d = chord_decomposition(unit_square());
  EXPECT_EQ(d.leaf_count(), 1u);
  EXPECT_TRUE(d.nodes[d.root].leaf);

  d = chord_decomposition(theta());
  EXPECT_EQ(d.leaf_count(), 2u);
  EXPECT_EQ(d.nodes.size(), 3u);
  EXPECT_FALSE(d.nodes[d.root].leaf);
  // The chord is the middle edge 4-5.
  std::set<VertexId> chord;
  for (auto v : d.nodes[d.root].chord) chord.insert(theta().id(v));
  EXPECT_EQ(chord, (std::set<VertexId>{4, 5}));

  d = chord_decomposition(grid(2));
  EXPECT_EQ(d.leaf_count(), 4u);
  EXPECT_EQ(d.nodes.size() - d.leaf_count(), 3u);
  EXPECT_EQ(d.depth(d.root), 2u);

  try {
    chord_decomposition(path_graph({{0, 0}, {1, 0}, {1, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHasDegreeOne);
  }
}

TEST(Graph, ChordDecompositionDepthOnLargerGrid) {
  const auto d = chord_decomposition(grid(4));
  EXPECT_EQ(d.leaf_count(), 16u);
  // Balanced splits keep the depth logarithmic in the face count.
  EXPECT_LE(d.depth(d.root), 8u);
}

// Random connected plane graphs for the structural invariants.
EmbeddedGraph random_connected_plane(Rng& rng, int n, int m) {
  for (;;) {
    const auto pts = spread_points(rng, n, 0, 5, 0.4);
    const auto g = EmbeddedGraph::validate(random_plane_raw(rng, pts, std::max(m, 2 * n), 0.9));
    if (is_connected(g)) return g;
  }
}

TEST(GraphProperty, EulerFormula) {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto g = random_connected_plane(rng, rng.integer(3, 9), rng.integer(3, 16));
    ASSERT_TRUE(is_plane(g));
    const FaceSet fs = faces(g);
    EXPECT_EQ(fs.faces.size() + g.vertex_count(), g.edge_count() + 2) << i;
    // Every dart in exactly one face.
    std::vector<int> seen(2 * g.edge_count(), 0);
    for (const auto& f : fs.faces)
      for (auto d : f.darts) ++seen[d];
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}

TEST(GraphProperty, PeelReassembles) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const auto pts = spread_points(rng, rng.integer(2, 10), 0, 5, 0.4);
    const auto g = EmbeddedGraph::validate(random_plane_raw(rng, pts, rng.integer(1, 14)));
    const auto r = peel_tree_substructures(g);
    EXPECT_EQ(reassemble(r), edge_ids(g)) << i;
    // Trees are edge-disjoint from the core and from each other.
    std::size_t total = r.core.graph.edge_count();
    for (const auto& t : r.trees) total += t.tree.graph.edge_count();
    EXPECT_EQ(total, g.edge_count());
  }
}

TEST(GraphProperty, ChordLeavesPartitionBoundedFaces) {
  Rng rng(23);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 150; ++i) {
    const auto g = random_connected_plane(rng, rng.integer(4, 10), rng.integer(5, 18));
    const auto peel = peel_tree_substructures(g);
    const auto& core = peel.core.graph;
    if (core.edge_count() == 0 || !is_connected(core)) continue;
    const auto d = chord_decomposition(core);
    std::vector<int> hits(d.faces.faces.size(), 0);
    for (const auto& n : d.nodes)
      if (n.leaf) ++hits[n.face];
    for (std::size_t f = 0; f < hits.size(); ++f) EXPECT_EQ(hits[f], f == d.faces.outer_face_index ? 0 : 1);
    ++checked;
  }
  EXPECT_GE(checked, 100);
}

TEST(GraphProperty, ComponentsInvariantUnderPermutation) {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    const auto pts = spread_points(rng, rng.integer(2, 10), 0, 5, 0.3);
    RawGraph raw = random_general_raw(rng, pts, rng.integer(0, 10));
    const auto base = connected_components(EmbeddedGraph::validate(raw));
    std::shuffle(raw.vertices.begin(), raw.vertices.end(), rng.engine());
    std::shuffle(raw.edges.begin(), raw.edges.end(), rng.engine());
    for (auto& [a, b] : raw.edges)
      if (rng.coin()) std::swap(a, b);
    auto perm = connected_components(EmbeddedGraph::validate(raw));
    auto sorted = [](std::vector<std::vector<VertexId>> c) {
      std::sort(c.begin(), c.end());
      return c;
    };
    EXPECT_EQ(sorted(base), sorted(perm));
  }
}

}  // namespace
