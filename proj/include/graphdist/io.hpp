#pragma once

// File formats: graph JSON, GeoJSON line networks, mapping JSON and SVG.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "graphdist/decision.hpp"
#include "graphdist/error.hpp"
#include "graphdist/graph.hpp"
#include "graphdist/placements.hpp"

namespace graphdist {

using json = nlohmann::json;

inline RawGraph raw_graph_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges")) {
    throw Error(ErrorCode::kParseError, "graph document needs \"vertices\" and \"edges\"");
  }
  RawGraph raw;
  try {
    for (const auto& v : doc.at("vertices")) {
      raw.vertices.push_back({v.at("id").get<VertexId>(), v.at("x").get<double>(), v.at("y").get<double>()});
    }
    for (const auto& e : doc.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kParseError, "edge must be a pair of ids");
      raw.edges.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParseError, ex.what());
  }
  return raw;
}

inline json graph_to_json(const EmbeddedGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& v : g.vertices()) doc["vertices"].push_back({{"id", v.id}, {"x", v.pos.x}, {"y", v.pos.y}});
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) doc["edges"].push_back({g.id(e.u), g.id(e.v)});
  return doc;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParseError, path + ": " + ex.what());
  }
}

struct IngestOptions {
  double merge_tolerance = 0.0;
  std::optional<double> densify;  // maximal segment length
};

/// Line network from a GeoJSON FeatureCollection (or a single Feature or
/// bare geometry). Coordinates are taken as planar. Each coordinate snaps to
/// the first earlier vertex within merge_tolerance; edges that collapse or
/// repeat are dropped.
inline RawGraph ingest_geojson(const json& doc, const IngestOptions& opt = {}) {
  std::vector<std::vector<std::pair<double, double>>> lines;
  std::function<void(const json&)> visit_geometry = [&](const json& geom) {
    if (geom.is_null()) return;
    const std::string type = geom.value("type", "");
    auto line_of = [](const json& coords) {
      std::vector<std::pair<double, double>> line;
      for (const auto& c : coords) {
        if (!c.is_array() || c.size() < 2) throw Error(ErrorCode::kParseError, "malformed coordinate");
        line.emplace_back(c[0].get<double>(), c[1].get<double>());
      }
      return line;
    };
    if (type == "LineString") {
      lines.push_back(line_of(geom.at("coordinates")));
    } else if (type == "MultiLineString") {
      for (const auto& l : geom.at("coordinates")) lines.push_back(line_of(l));
    } else if (type == "GeometryCollection") {
      for (const auto& g : geom.at("geometries")) visit_geometry(g);
    } else {
      throw Error(ErrorCode::kUnsupportedGeometry, "geometry type '" + type + "' is not a line");
    }
  };
  try {
    const std::string type = doc.value("type", "");
    if (type == "FeatureCollection") {
      for (const auto& f : doc.at("features")) visit_geometry(f.at("geometry"));
    } else if (type == "Feature") {
      visit_geometry(doc.at("geometry"));
    } else {
      visit_geometry(doc);
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kParseError, ex.what());
  }

  RawGraph raw;
  auto vertex_for = [&](double x, double y) -> VertexId {
    for (const auto& v : raw.vertices) {
      const double d = std::hypot(v.x - x, v.y - y);
      if (opt.merge_tolerance > 0.0 ? d <= opt.merge_tolerance : (v.x == x && v.y == y)) return v.id;
    }
    const VertexId id = static_cast<VertexId>(raw.vertices.size());
    raw.vertices.push_back({id, x, y});
    return id;
  };
  std::set<std::pair<VertexId, VertexId>> seen;
  auto add_edge = [&](VertexId a, VertexId b) {
    if (a == b) return;
    const auto key = std::minmax(a, b);
    if (seen.insert({key.first, key.second}).second) raw.edges.emplace_back(a, b);
  };
  for (const auto& line : lines) {
    if (line.size() < 2) continue;
    VertexId prev = vertex_for(line[0].first, line[0].second);
    for (std::size_t i = 1; i < line.size(); ++i) {
      const auto [x0, y0] = line[i - 1];
      const auto [x1, y1] = line[i];
      std::size_t pieces = 1;
      if (opt.densify && *opt.densify > 0.0) {
        pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::hypot(x1 - x0, y1 - y0) / *opt.densify)));
      }
      for (std::size_t k = 1; k <= pieces; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(pieces);
        const VertexId cur = k == pieces ? vertex_for(x1, y1) : vertex_for(x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        add_edge(prev, cur);
        prev = cur;
      }
    }
  }
  if (raw.edges.empty()) throw Error(ErrorCode::kEmptyInput, "no line segments in GeoJSON input");
  // Drop vertices no edge uses (all coordinates of degenerate lines).
  std::set<VertexId> used;
  for (const auto& [a, b] : raw.edges) {
    used.insert(a);
    used.insert(b);
  }
  raw.vertices.erase(std::remove_if(raw.vertices.begin(), raw.vertices.end(),
                                    [&](const RawVertex& v) { return !used.count(v.id); }),
                     raw.vertices.end());
  return raw;
}

inline bool looks_like_geojson(const json& doc) {
  if (!doc.is_object() || !doc.contains("type")) return false;
  return !doc.contains("vertices");
}

// Mapping JSON.

inline json point_to_json(const EmbeddedGraph& g2, const PointOnGraph& p) {
  const auto& e = g2.edge(p.edge);
  const Point2 q = position(g2, p);
  return {{"edge", {g2.id(e.u), g2.id(e.v)}}, {"t", p.t}, {"x", q.x}, {"y", q.y}};
}

inline PointOnGraph point_from_json(const EmbeddedGraph& g2, const json& j) {
  try {
    const VertexId a = j.at("edge").at(0).get<VertexId>();
    const VertexId b = j.at("edge").at(1).get<VertexId>();
    double t = j.at("t").get<double>();
    const auto ia = g2.index_of(a), ib = g2.index_of(b);
    if (!ia || !ib) throw Error(ErrorCode::kMalformedMapping, "mapping refers to an unknown G2 vertex");
    const auto f = g2.find_edge(*ia, *ib);
    if (!f) throw Error(ErrorCode::kMalformedMapping, "mapping refers to a missing G2 edge");
    if (g2.edge(*f).u != *ia) t = 1.0 - t;
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::kMalformedMapping, "parameter outside [0,1]");
    return canonical_point(g2, *f, t);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kMalformedMapping, ex.what());
  }
}

inline json mapping_to_json(const EmbeddedGraph& g2, const GraphMapping& m) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& [id, p] : m.vertex_images) {
    json v = point_to_json(g2, p);
    v["id"] = id;
    doc["vertices"].push_back(v);
  }
  doc["edges"] = json::array();
  for (const auto& [e, path] : m.edge_images) {
    json pts = json::array();
    for (const auto& p : path) pts.push_back(point_to_json(g2, p));
    doc["edges"].push_back({{"edge", {e.first, e.second}}, {"path", pts}});
  }
  return doc;
}

inline GraphMapping mapping_from_json(const EmbeddedGraph& g2, const json& doc) {
  GraphMapping m;
  try {
    for (const auto& v : doc.at("vertices")) m.vertex_images[v.at("id").get<VertexId>()] = point_from_json(g2, v);
    for (const auto& e : doc.at("edges")) {
      VertexId a = e.at("edge").at(0).get<VertexId>();
      VertexId b = e.at("edge").at(1).get<VertexId>();
      std::vector<PointOnGraph> path;
      for (const auto& p : e.at("path")) path.push_back(point_from_json(g2, p));
      if (a > b) {
        std::swap(a, b);
        std::reverse(path.begin(), path.end());
      }
      m.edge_images[{a, b}] = std::move(path);
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kMalformedMapping, ex.what());
  }
  return m;
}

// SVG rendering.

struct RenderOptions {
  std::optional<double> eps;
  const GraphMapping* mapping = nullptr;
  double width = 800.0;
};

/// Deterministic SVG: G1 blue, G2 red, optional eps balls and tubes around
/// G1 and the placements they cut out of G2, optional witness paths dashed.
inline std::string render_svg(const EmbeddedGraph& g1, const EmbeddedGraph& g2, const RenderOptions& opt = {}) {
  double minx = 0, miny = 0, maxx = 1, maxy = 1;
  bool any = false;
  for (const EmbeddedGraph* g : {&g1, &g2}) {
    for (const auto& v : g->vertices()) {
      if (!any) {
        minx = maxx = v.pos.x;
        miny = maxy = v.pos.y;
        any = true;
      }
      minx = std::min(minx, v.pos.x);
      maxx = std::max(maxx, v.pos.x);
      miny = std::min(miny, v.pos.y);
      maxy = std::max(maxy, v.pos.y);
    }
  }
  const double span = std::max({maxx - minx, maxy - miny, 1e-9});
  const double margin = opt.eps ? *opt.eps + 0.02 * span : 0.05 * span;
  minx -= margin;
  miny -= margin;
  maxx += margin;
  maxy += margin;
  const double scale = opt.width / (maxx - minx);
  const double height = (maxy - miny) * scale;
  auto sx = [&](double x) { return (x - minx) * scale; };
  auto sy = [&](double y) { return (maxy - y) * scale; };

  std::string out;
  char buf[512];
  auto emit = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
  };
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  emit("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"%.3f\" height=\"%.3f\" "
       "viewBox=\"0 0 %.3f %.3f\">\n",
       opt.width, height, opt.width, height);
  emit("<rect x=\"0\" y=\"0\" width=\"%.3f\" height=\"%.3f\" fill=\"white\"/>\n", opt.width, height);
  const double stroke = std::max(1.0, opt.width / 400.0);

  if (opt.eps) {
    const double r = *opt.eps * scale;
    out += "<g id=\"tubes\" stroke=\"#1f4fd8\" stroke-opacity=\"0.2\" stroke-linecap=\"round\" fill=\"none\">\n";
    for (std::size_t e = 0; e < g1.edge_count(); ++e) {
      const Segment s = g1.segment(e);
      emit("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke-width=\"%.3f\"/>\n", sx(s.a.x), sy(s.a.y),
           sx(s.b.x), sy(s.b.y), 2.0 * r);
    }
    out += "</g>\n<g id=\"balls\" fill=\"#1f4fd8\" fill-opacity=\"0.2\">\n";
    for (const auto& v : g1.vertices()) emit("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", sx(v.pos.x), sy(v.pos.y), r);
    emit("</g>\n<g id=\"placements\" stroke=\"#e08a00\" stroke-width=\"%.3f\" stroke-linecap=\"round\">\n",
         3.0 * stroke);
    const PlacementTable table = compute_placements(g1, g2, *opt.eps);
    for (const auto& list : table) {
      for (const auto& pl : list) {
        for (const Portion& p : pl.portions) {
          const Segment s = g2.segment(p.edge);
          const Point2 a = s.at(p.range.lo), b = s.at(p.range.hi);
          emit("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", sx(a.x), sy(a.y), sx(b.x), sy(b.y));
        }
      }
    }
    out += "</g>\n";
  }
  auto draw_graph = [&](const EmbeddedGraph& g, const char* id, const char* color) {
    emit("<g id=\"%s\" stroke=\"%s\" fill=\"%s\" stroke-width=\"%.3f\">\n", id, color, color, stroke);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const Segment s = g.segment(e);
      emit("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", sx(s.a.x), sy(s.a.y), sx(s.b.x), sy(s.b.y));
    }
    for (const auto& v : g.vertices()) emit("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", sx(v.pos.x), sy(v.pos.y), 2.0 * stroke);
    out += "</g>\n";
  };
  draw_graph(g2, "g2", "#d62728");
  draw_graph(g1, "g1", "#1f4fd8");
  if (opt.mapping) {
    emit("<g id=\"mapping\" stroke=\"#222222\" stroke-width=\"%.3f\" stroke-dasharray=\"%.3f %.3f\" fill=\"none\">\n",
         stroke, 4.0 * stroke, 3.0 * stroke);
    for (const auto& [e, path] : opt.mapping->edge_images) {
      out += "<polyline points=\"";
      for (std::size_t i = 0; i < path.size(); ++i) {
        const Point2 q = position(g2, path[i]);
        emit(i == 0 ? "%.3f,%.3f" : " %.3f,%.3f", sx(q.x), sy(q.y));
      }
      out += "\"/>\n";
    }
    for (const auto& [id, p] : opt.mapping->vertex_images) {
      const Point2 q = position(g2, p);
      emit("<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" fill=\"#222222\"/>\n", sx(q.x), sy(q.y), 2.5 * stroke);
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace graphdist
