// graphdist command-line tool.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "graphdist/graphdist.hpp"

using namespace graphdist;

namespace {

struct InputFlags {
  std::string g1_path, g2_path;
  bool assume_planar = false;
  double merge_tolerance = 0.0;
  double densify = 0.0;
};

EmbeddedGraph load_graph(const std::string& path, const InputFlags& in) {
  const json doc = read_json_file(path);
  if (looks_like_geojson(doc)) {
    if (!in.assume_planar) {
      throw Error(ErrorCode::kPreconditionViolated,
                  path + " is GeoJSON; coordinates are used as planar, pass --assume-planar to confirm");
    }
    IngestOptions opt;
    opt.merge_tolerance = in.merge_tolerance;
    if (in.densify > 0.0) opt.densify = in.densify;
    return EmbeddedGraph::validate(ingest_geojson(doc, opt));
  }
  return EmbeddedGraph::validate(raw_graph_from_json(doc));
}

// Nine significant digits; infinity as the string "inf".
json number(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return json::parse(buf);
}

Mode parse_mode(const std::string& s) {
  if (s == "strong") return Mode::kStrong;
  if (s == "weak") return Mode::kWeak;
  throw Error(ErrorCode::kPreconditionViolated, "unknown mode '" + s + "'");
}

Strategy to_strategy(const std::string& s) {
  const auto st = parse_strategy(s);
  if (!st) throw Error(ErrorCode::kPreconditionViolated, "unknown strategy '" + s + "'");
  return *st;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  out << text;
}

json outcome_json(const DecisionOutcome& o) {
  json j;
  j["answer"] = to_string(o.answer);
  j["method"] = to_string(o.method);
  if (o.approx_factor) j["approx_factor"] = number(*o.approx_factor);
  if (!o.notes.empty()) j["notes"] = o.notes;
  j["expansions"] = o.expansions;
  j["components"] = json::array();
  for (const auto& c : o.components) {
    json cj;
    cj["vertices"] = c.vertices;
    cj["passed"] = c.passed;
    cj["method"] = to_string(c.method);
    if (c.g2_component) cj["g2_component"] = *c.g2_component;
    json surv = json::object();
    for (const auto& [id, n] : c.survivors) surv[std::to_string(id)] = n;
    cj["survivors"] = surv;
    j["components"].push_back(cj);
  }
  return j;
}

json distance_json(const DistanceResult& r) {
  json j;
  j["direction"] = to_string(r.direction);
  j["value"] = number(r.value);
  j["decisions"] = r.decisions_made;
  j["candidates"] = r.candidate_count;
  if (r.deciding_critical) {
    j["deciding_critical"] = {{"value", number(r.deciding_critical->value)},
                              {"type", static_cast<int>(r.deciding_critical->type)},
                              {"provenance", r.deciding_critical->provenance}};
  }
  return j;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void add_inputs(CLI::App* cmd, InputFlags& in) {
  cmd->add_option("--g1", in.g1_path, "first graph (graph JSON or GeoJSON)")->required();
  cmd->add_option("--g2", in.g2_path, "second graph (graph JSON or GeoJSON)")->required();
  cmd->add_flag("--assume-planar", in.assume_planar, "treat GeoJSON coordinates as planar");
  cmd->add_option("--merge-tolerance", in.merge_tolerance, "GeoJSON endpoint snapping distance")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--densify", in.densify, "GeoJSON maximal segment length (0 = off)")->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strong and weak graph distances between straight-line embedded graphs"};
  app.require_subcommand(1);

  InputFlags in;
  double eps = 0.0;
  std::string mode_s = "strong", direction_s = "1to2", strategy_s = "auto", out_path, mapping_path;

  auto* decide = app.add_subcommand("decide", "decide whether the distance is at most eps");
  add_inputs(decide, in);
  decide->add_option("--eps", eps, "distance threshold")->required()->check(CLI::NonNegativeNumber);
  decide->add_option("--mode", mode_s, "strong|weak")->check(CLI::IsMember({"strong", "weak"}));
  decide->add_option("--direction", direction_s, "1to2|2to1|both")->check(CLI::IsMember({"1to2", "2to1", "both"}));
  decide->add_option("--strategy", strategy_s, "auto|tree|plane_weak|plane_strong_chord|brute_force");
  decide->add_option("--witness", out_path, "write the witness mapping (1to2 only) to this file");

  auto* compute = app.add_subcommand("compute", "compute the directed or undirected distance");
  add_inputs(compute, in);
  compute->add_option("--mode", mode_s, "strong|weak")->check(CLI::IsMember({"strong", "weak"}));
  compute->add_option("--direction", direction_s, "1to2|2to1|both")->check(CLI::IsMember({"1to2", "2to1", "both"}));
  compute->add_option("--strategy", strategy_s, "decision strategy");

  auto* map = app.add_subcommand("map", "build a witness mapping G1 -> G2 at eps");
  add_inputs(map, in);
  map->add_option("--eps", eps, "distance threshold")->required()->check(CLI::NonNegativeNumber);
  map->add_option("--mode", mode_s, "strong|weak")->check(CLI::IsMember({"strong", "weak"}));
  map->add_option("--strategy", strategy_s, "decision strategy");
  map->add_option("--out", out_path, "mapping JSON output")->required();

  auto* criticals = app.add_subcommand("criticals", "list the candidate distance values");
  add_inputs(criticals, in);

  auto* render = app.add_subcommand("render", "draw both graphs as SVG");
  add_inputs(render, in);
  auto* render_eps = render->add_option("--eps", eps, "draw balls, tubes and placements at eps");
  render->add_option("--mapping", mapping_path, "overlay a mapping JSON");
  render->add_option("--out", out_path, "SVG output")->required();

  auto* verify = app.add_subcommand("verify", "check a mapping JSON against eps");
  add_inputs(verify, in);
  verify->add_option("--eps", eps, "distance threshold")->required()->check(CLI::NonNegativeNumber);
  verify->add_option("--mode", mode_s, "strong|weak")->check(CLI::IsMember({"strong", "weak"}));
  verify->add_option("--mapping", mapping_path, "mapping JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    const EmbeddedGraph g1 = load_graph(in.g1_path, in);
    const EmbeddedGraph g2 = load_graph(in.g2_path, in);
    const Mode mode = parse_mode(mode_s);
    DecideOptions opt;
    opt.strategy = to_strategy(strategy_s);

    if (decide->parsed()) {
      json report;
      report["eps"] = number(eps);
      report["mode"] = to_string(mode);
      report["direction"] = direction_s;
      bool all_yes = true;
      if (!out_path.empty()) opt.require_witness = true;
      if (direction_s != "2to1") {
        const DecisionOutcome o = decide_directed(g1, g2, eps, mode, opt);
        report["1to2"] = outcome_json(o);
        all_yes = all_yes && o.yes();
        if (!out_path.empty() && o.witness) write_text(out_path, mapping_to_json(g2, *o.witness).dump(2) + "\n");
      }
      if (direction_s != "1to2") {
        const DecisionOutcome o = decide_directed(g2, g1, eps, mode, opt);
        report["2to1"] = outcome_json(o);
        all_yes = all_yes && o.yes();
      }
      report["answer"] = all_yes ? "YES" : "NO";
      report["elapsed_ms"] = elapsed_ms(t0);
      std::cout << report.dump(2) << "\n";
      return all_yes ? 0 : 1;
    }

    if (compute->parsed()) {
      json report;
      report["mode"] = to_string(mode);
      if (direction_s == "both") {
        const UndirectedResult r = compute_undirected(g1, g2, mode, opt);
        report["value"] = number(r.value);
        report["binding"] = to_string(r.binding);
        report["1to2"] = distance_json(r.forward);
        report["2to1"] = distance_json(r.backward);
      } else {
        const Direction d = direction_s == "1to2" ? Direction::kOneToTwo : Direction::kTwoToOne;
        const DistanceResult r = compute_distance(g1, g2, mode, d, opt);
        report["value"] = number(r.value);
        report[direction_s] = distance_json(r);
      }
      report["elapsed_ms"] = elapsed_ms(t0);
      std::cout << report.dump(2) << "\n";
      return 0;
    }

    if (map->parsed()) {
      opt.require_witness = true;
      const DecisionOutcome o = decide_directed(g1, g2, eps, mode, opt);
      json report = outcome_json(o);
      if (o.yes() && !o.witness) throw Error(ErrorCode::kWitnessUnavailable, "decision holds but no witness was built");
      if (o.witness) {
        const VerifyReport v = verify_mapping(g1, g2, *o.witness, eps, mode);
        report["verified"] = v.ok;
        report["worst_value"] = number(v.worst_value);
        write_text(out_path, mapping_to_json(g2, *o.witness).dump(2) + "\n");
      }
      report["elapsed_ms"] = elapsed_ms(t0);
      std::cout << report.dump(2) << "\n";
      return o.yes() ? 0 : 1;
    }

    if (criticals->parsed()) {
      const CriticalValueSet cs = critical_values(g1, g2);
      json report;
      report["raw_count"] = cs.raw_count;
      report["values"] = json::array();
      for (const auto& c : cs.values) {
        report["values"].push_back(
            {{"value", number(c.value)}, {"type", static_cast<int>(c.type)}, {"provenance", c.provenance}});
      }
      std::cout << report.dump(2) << "\n";
      return 0;
    }

    if (render->parsed()) {
      RenderOptions ro;
      if (render_eps->count() > 0) ro.eps = eps;
      std::optional<GraphMapping> m;
      if (!mapping_path.empty()) {
        m = mapping_from_json(g2, read_json_file(mapping_path));
        ro.mapping = &*m;
      }
      write_text(out_path, render_svg(g1, g2, ro));
      return 0;
    }

    if (verify->parsed()) {
      const GraphMapping m = mapping_from_json(g2, read_json_file(mapping_path));
      const VerifyReport v = verify_mapping(g1, g2, m, eps, mode);
      json report;
      report["ok"] = v.ok;
      report["worst_value"] = number(v.worst_value);
      if (v.worst_edge) report["worst_edge"] = {v.worst_edge->first, v.worst_edge->second};
      report["edges"] = json::array();
      for (const auto& e : v.edges) {
        report["edges"].push_back(
            {{"edge", {e.edge.first, e.edge.second}}, {"ok", e.ok}, {"simple", e.simple}, {"value", number(e.value)}});
      }
      std::cout << report.dump(2) << "\n";
      return v.ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
