#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "support.hpp"

using namespace gdtest;
namespace fs = std::filesystem;

namespace {

json line_string(std::vector<std::pair<double, double>> pts) {
  json coords = json::array();
  for (const auto& [x, y] : pts) coords.push_back({x, y});
  return {{"type", "Feature"}, {"properties", json::object()}, {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}};
}

json collection(std::vector<json> features) {
  return {{"type", "FeatureCollection"}, {"features", features}};
}

std::optional<ErrorCode> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// graph JSON

TEST(GraphJson, RoundTripIsIdempotent) {
  Rng rng(51);
  for (int i = 0; i < 50; ++i) {
    const auto g = EmbeddedGraph::validate(random_plane_raw(rng, spread_points(rng, rng.integer(2, 8), 0, 5, 0.3), 12));
    const json once = graph_to_json(g);
    const json twice = graph_to_json(EmbeddedGraph::validate(raw_graph_from_json(once)));
    EXPECT_EQ(once.dump(), twice.dump());
  }
}

TEST(GraphJson, ParseErrors) {
  EXPECT_EQ(error_of([] { raw_graph_from_json(json::parse(R"({"vertices": 3})")); }), ErrorCode::kParseError);
  EXPECT_EQ(error_of([] { read_json_file(data_path("does_not_exist.json")); }), ErrorCode::kParseError);
  const json dup = json::parse(R"({"vertices":[{"id":1,"x":0,"y":0},{"id":1,"x":1,"y":0}],"edges":[]})");
  EXPECT_EQ(error_of([&] { EmbeddedGraph::validate(raw_graph_from_json(dup)); }), ErrorCode::kDuplicateId);
}

// GeoJSON

TEST(GeoJson, ThreePointLineString) {
  const RawGraph r = ingest_geojson(collection({line_string({{0, 0}, {1, 0}, {1, 1}})}));
  EXPECT_EQ(r.vertices.size(), 3u);
  EXPECT_EQ(r.edges.size(), 2u);
  EXPECT_NO_THROW(EmbeddedGraph::validate(r));
}

TEST(GeoJson, SharedEndpoint) {
  const RawGraph r = ingest_geojson(collection({line_string({{0, 0}, {1, 0}}), line_string({{1, 0}, {1, 1}})}));
  EXPECT_EQ(r.vertices.size(), 3u);
  EXPECT_EQ(r.edges.size(), 2u);
  EXPECT_TRUE(is_connected(EmbeddedGraph::validate(r)));
}

TEST(GeoJson, MergeTolerance) {
  const json doc = collection({line_string({{0, 0}, {2, 0}}), line_string({{2.5, 0}, {4, 0}})});
  EXPECT_EQ(ingest_geojson(doc).vertices.size(), 4u);
  IngestOptions opt;
  opt.merge_tolerance = 1.0;
  const RawGraph r = ingest_geojson(doc, opt);
  ASSERT_EQ(r.vertices.size(), 3u);
  // First-seen position wins.
  bool has_two = false;
  for (const auto& v : r.vertices) has_two = has_two || (v.x == 2.0 && v.y == 0.0);
  EXPECT_TRUE(has_two);
}

TEST(GeoJson, DuplicatesAndDensify) {
  const json doc = collection({line_string({{0, 0}, {1, 0}}), line_string({{1, 0}, {0, 0}})});
  EXPECT_EQ(ingest_geojson(doc).edges.size(), 1u);
  IngestOptions opt;
  opt.densify = 0.3;
  const RawGraph r = ingest_geojson(collection({line_string({{0, 0}, {1, 0}})}), opt);
  EXPECT_EQ(r.edges.size(), 4u);
}

TEST(GeoJson, MultiLineStringAndGeometryCollection) {
  const json multi = {{"type", "MultiLineString"}, {"coordinates", {{{0, 0}, {1, 0}}, {{5, 5}, {6, 5}}}}};
  const RawGraph r = ingest_geojson(multi);
  EXPECT_EQ(r.edges.size(), 2u);
  EXPECT_EQ(connected_components(EmbeddedGraph::validate(r)).size(), 2u);
  const json gc = {{"type", "GeometryCollection"}, {"geometries", {multi}}};
  EXPECT_EQ(ingest_geojson(gc).edges.size(), 2u);
}

TEST(GeoJson, Errors) {
  const json poly = {{"type", "Polygon"}, {"coordinates", {{{0, 0}, {1, 0}, {1, 1}, {0, 0}}}}};
  EXPECT_EQ(error_of([&] { ingest_geojson(poly); }), ErrorCode::kUnsupportedGeometry);
  EXPECT_EQ(error_of([] { ingest_geojson(collection({})); }), ErrorCode::kEmptyInput);
  EXPECT_EQ(error_of([] { ingest_geojson(collection({line_string({{1, 1}, {1, 1}})})); }), ErrorCode::kEmptyInput);
}

TEST(GeoJson, BundledRoadsPassValidate) {
  IngestOptions opt;
  opt.merge_tolerance = 1.0;
  for (const char* name : {"roads_a.geojson", "roads_b.geojson"}) {
    const json doc = read_json_file(data_path(name));
    EXPECT_TRUE(looks_like_geojson(doc));
    const EmbeddedGraph g = EmbeddedGraph::validate(ingest_geojson(doc, opt));
    EXPECT_TRUE(is_connected(g)) << name;
  }
  EXPECT_FALSE(looks_like_geojson(read_json_file(data_path("square.json"))));
}

// mapping JSON

TEST(MappingJson, RoundTrip) {
  const EmbeddedGraph sq = unit_square();
  const EmbeddedGraph sub = load_fixture("square_subdivided.json");
  DecideOptions o;
  o.require_witness = true;
  const DecisionOutcome out = decide_directed(sq, sub, 0.05, Mode::kStrong, o);
  ASSERT_TRUE(out.witness);
  const json j = mapping_to_json(sub, *out.witness);
  const GraphMapping back = mapping_from_json(sub, j);
  EXPECT_EQ(mapping_to_json(sub, back).dump(), j.dump());
  EXPECT_TRUE(verify_mapping(sq, sub, back, 0.05, Mode::kStrong).ok);
}

TEST(MappingJson, ReversedEdgeKeys) {
  const EmbeddedGraph g = path_graph({{0, 0}, {1, 0}});
  const json p = point_to_json(g, {0, 0.25});
  json flipped = p;
  // t runs from the first listed vertex.
  flipped["edge"] = {p["edge"][1], p["edge"][0]};
  flipped["t"] = 0.75;
  const PointOnGraph q = point_from_json(g, flipped);
  EXPECT_NEAR(position(g, q).x, 0.25, 1e-12);
  json bad = p;
  bad["edge"] = {0, 7};
  EXPECT_EQ(error_of([&] { point_from_json(g, bad); }), ErrorCode::kMalformedMapping);
}

// render

TEST(Render, DeterministicAndLayered) {
  const EmbeddedGraph sq = unit_square();
  const EmbeddedGraph sub = load_fixture("square_subdivided.json");
  const std::string plain = render_svg(sq, sub);
  EXPECT_EQ(plain, render_svg(sq, sub));
  EXPECT_EQ(plain.find("tubes"), std::string::npos);
  EXPECT_NE(plain.find("#1f4fd8"), std::string::npos);
  EXPECT_NE(plain.find("#d62728"), std::string::npos);

  RenderOptions ro;
  ro.eps = 0.1;
  const std::string layered = render_svg(sq, sub, ro);
  EXPECT_NE(layered.find("tubes"), std::string::npos);
  EXPECT_NE(layered.find("0.2"), std::string::npos);

  DecideOptions o;
  o.require_witness = true;
  const DecisionOutcome out = decide_directed(sq, sub, 0.1, Mode::kStrong, o);
  ASSERT_TRUE(out.witness);
  ro.mapping = &*out.witness;
  const std::string mapped = render_svg(sq, sub, ro);
  EXPECT_NE(mapped.find("stroke-dasharray"), std::string::npos);
  EXPECT_EQ(plain.find("stroke-dasharray"), std::string::npos);
}

// CLI

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("graphdist_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, std::string* out = nullptr) {
    const fs::path capture = dir_ / "stdout.txt";
    const std::string cmd = std::string(GRAPHDIST_CLI) + " " + args + " > " + capture.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    if (out) {
      std::ifstream in(capture);
      std::stringstream ss;
      ss << in.rdbuf();
      *out = ss.str();
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }
  static std::string d(const std::string& name) { return data_path(name); }

  fs::path dir_;
};

TEST_F(Cli, DecideExitCodes) {
  const std::string sq = d("square.json");
  EXPECT_EQ(run("decide --g1 " + sq + " --g2 " + sq + " --eps 0.01 --mode strong --direction both"), 0);
  const std::string ce = "--g1 " + d("counterexample_g1.json") + " --g2 " + d("counterexample_g2.json") + " --eps 0.995";
  EXPECT_EQ(run("decide " + ce + " --mode strong"), 1);
  EXPECT_EQ(run("decide " + ce + " --mode weak"), 0);

  std::ofstream(file("broken.json")) << "{ not json";
  EXPECT_EQ(run("decide --g1 " + file("broken.json") + " --g2 " + sq + " --eps 1"), 2);
  EXPECT_EQ(run("decide --g1 " + sq + " --g2 " + sq), 2);  // missing --eps
  EXPECT_EQ(run("decide --g1 " + sq + " --g2 " + sq + " --eps 1 --strategy tree"), 2);

  // Repeated runs give the same code.
  for (int i = 0; i < 3; ++i) EXPECT_EQ(run("decide " + ce + " --mode strong"), 1);
}

TEST_F(Cli, DecideReport) {
  std::string out;
  const std::string sq = d("square.json");
  ASSERT_EQ(run("decide --g1 " + sq + " --g2 " + d("square_subdivided.json") + " --eps 0.01 --witness " +
                    file("w.json"),
                &out),
            0);
  const json j = json::parse(out);
  EXPECT_EQ(j["answer"], "YES");
  EXPECT_TRUE(j["1to2"].contains("method"));
  EXPECT_TRUE(j["1to2"]["components"][0].contains("survivors"));
  EXPECT_TRUE(j.contains("elapsed_ms"));
  EXPECT_TRUE(fs::exists(file("w.json")));
}

TEST_F(Cli, ComputeValues) {
  std::string out;
  ASSERT_EQ(run("compute --g1 " + d("segment_low.json") + " --g2 " + d("segment_high.json") + " --direction both",
                &out),
            0);
  EXPECT_NEAR(json::parse(out)["value"].get<double>(), 1.0, 1e-9);
  ASSERT_EQ(run("compute --g1 " + d("square.json") + " --g2 " + d("square_subdivided.json") + " --direction both",
                &out),
            0);
  EXPECT_EQ(json::parse(out)["value"].get<double>(), 0.0);
}

TEST_F(Cli, ComputeWithinCurveBracket) {
  Rng rng(52);
  for (int i = 0; i < 5; ++i) {
    const auto a = random_polyline(rng, rng.integer(2, 4));
    const auto b = random_polyline(rng, rng.integer(2, 4));
    std::ofstream(file("a.json")) << graph_to_json(path_graph(a)).dump();
    std::ofstream(file("b.json")) << graph_to_json(path_graph(b)).dump();
    std::string out;
    ASSERT_EQ(run("compute --g1 " + file("a.json") + " --g2 " + file("b.json") + " --direction both", &out), 0);
    const double v = json::parse(out)["value"].get<double>();
    EXPECT_LE(weak_free_value(Polyline(a), Polyline(b)), v + 1e-6);
    EXPECT_LE(v, frechet_value(Polyline(a), Polyline(b)) + 1e-6);
  }
}

TEST_F(Cli, MapVerifyRender) {
  const std::string pair = "--g1 " + d("theta.json") + " --g2 " + d("theta.json");
  ASSERT_EQ(run("map " + pair + " --eps 0.05 --out " + file("m.json")), 0);
  EXPECT_EQ(run("verify " + pair + " --eps 0.05 --mapping " + file("m.json")), 0);
  ASSERT_EQ(run("render " + pair + " --out " + file("a.svg")), 0);
  ASSERT_EQ(run("render " + pair + " --out " + file("b.svg")), 0);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  EXPECT_EQ(slurp(file("a.svg")), slurp(file("b.svg")));
  ASSERT_EQ(run("render " + pair + " --eps 0.05 --mapping " + file("m.json") + " --out " + file("c.svg")), 0);
  EXPECT_NE(slurp(file("c.svg")).find("stroke-dasharray"), std::string::npos);
  EXPECT_EQ(slurp(file("a.svg")).find("stroke-dasharray"), std::string::npos);
}

TEST_F(Cli, GeoJsonNeedsAssumePlanar) {
  const std::string roads = "--g1 " + d("roads_a.geojson") + " --g2 " + d("roads_b.geojson");
  EXPECT_EQ(run("criticals " + roads), 2);
  EXPECT_EQ(run("criticals " + roads + " --assume-planar --merge-tolerance 1"), 0);
}

}  // namespace
