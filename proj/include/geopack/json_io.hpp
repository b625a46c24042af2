#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "geopack/core.hpp"
#include "geopack/generators.hpp"
#include "geopack/geometry.hpp"
#include "geopack/rounding.hpp"

// JSON serialization for hypergraphs, geometric instances, generator specs and
// solver configuration. Strict mode rejects unknown fields; lenient mode
// collects warnings instead.

namespace geopack {

enum class ParseMode { strict, lenient };

namespace detail {

inline void check_fields(const nlohmann::json& obj, const std::vector<std::string>& allowed,
                         const std::string& where, ParseMode mode,
                         std::vector<std::string>* warnings) {
  if (!obj.is_object()) throw std::invalid_argument(where + ": expected a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const std::string& a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) {
      const std::string msg = where + ": unknown field \"" + it.key() + "\"";
      if (mode == ParseMode::strict) throw std::invalid_argument(msg);
      if (warnings) warnings->push_back(msg);
    }
  }
}

inline double require_number(const nlohmann::json& obj, const std::string& key,
                             const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw std::invalid_argument(where + ": missing numeric field \"" + key + "\"");
  return obj[key].get<double>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hypergraph <-> {"vertices":[{"w":..}], "edges":[{"v":[..],"cap":..}]}

inline nlohmann::json hypergraph_to_json(const Hypergraph& h) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (double w : h.vertex_weights) j["vertices"].push_back({{"w", w}});
  j["edges"] = nlohmann::json::array();
  for (const Hyperedge& e : h.edges) j["edges"].push_back({{"v", e.vertices}, {"cap", e.capacity}});
  return j;
}

inline Hypergraph hypergraph_from_json(const nlohmann::json& j, ParseMode mode = ParseMode::strict,
                                       std::vector<std::string>* warnings = nullptr) {
  detail::check_fields(j, {"vertices", "edges"}, "hypergraph", mode, warnings);
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw std::invalid_argument("hypergraph: missing \"vertices\" array");
  Hypergraph h;
  for (const auto& v : j["vertices"]) {
    detail::check_fields(v, {"w"}, "hypergraph vertex", mode, warnings);
    h.vertex_weights.push_back(detail::require_number(v, "w", "hypergraph vertex"));
  }
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) throw std::invalid_argument("hypergraph: \"edges\" must be an array");
    for (const auto& e : j["edges"]) {
      detail::check_fields(e, {"v", "cap"}, "hypergraph edge", mode, warnings);
      if (!e.contains("v") || !e["v"].is_array())
        throw std::invalid_argument("hypergraph edge: missing \"v\" array");
      Hyperedge edge;
      for (const auto& idx : e["v"]) edge.vertices.push_back(idx.get<int>());
      std::sort(edge.vertices.begin(), edge.vertices.end());
      edge.capacity = static_cast<int>(detail::require_number(e, "cap", "hypergraph edge"));
      h.edges.push_back(std::move(edge));
    }
  }
  h.validate();
  return h;
}

// ---------------------------------------------------------------------------
// Regions and geometric instances.

inline nlohmann::json region_to_json(const GeomRegion& r, PackDirection direction) {
  nlohmann::json j;
  struct Emitter {
    nlohmann::json& j;
    void operator()(const Disk& d) const {
      j["kind"] = "disk";
      j["params"] = {{"cx", d.center.x}, {"cy", d.center.y}, {"r", d.radius}};
    }
    void operator()(const Rect& r) const {
      j["kind"] = "rect";
      j["params"] = {{"xmin", r.lo.x}, {"ymin", r.lo.y}, {"xmax", r.hi.x}, {"ymax", r.hi.y}};
    }
    void operator()(const Box& b) const {
      j["kind"] = "box";
      j["params"] = {{"xmin", b.lo.x}, {"ymin", b.lo.y}, {"zmin", b.lo.z},
                     {"xmax", b.hi.x}, {"ymax", b.hi.y}, {"zmax", b.hi.z}};
    }
    void operator()(const Triangle& t) const {
      j["kind"] = "triangle";
      j["params"] = {{"ax", t.a.x}, {"ay", t.a.y}, {"bx", t.b.x},
                     {"by", t.b.y}, {"cx", t.c.x}, {"cy", t.c.y}};
    }
    void operator()(const Halfspace3& h) const {
      j["kind"] = "halfspace3";
      j["params"] = {{"a", h.a}, {"b", h.b}, {"c", h.c}};
    }
    void operator()(const VerticalRay3& v) const {
      j["kind"] = "vertical_ray3";
      j["params"] = {{"x", v.apex.x}, {"y", v.apex.y}, {"z", v.apex.z}, {"up", v.up}};
    }
  };
  std::visit(Emitter{j}, r.shape);
  if (direction == PackDirection::pack_regions)
    j["w"] = r.weight;
  else
    j["cap"] = r.capacity;
  return j;
}

inline GeomRegion region_from_json(const nlohmann::json& j, ParseMode mode,
                                   std::vector<std::string>* warnings) {
  detail::check_fields(j, {"kind", "params", "w", "cap"}, "region", mode, warnings);
  if (!j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("region: missing \"kind\"");
  if (!j.contains("params")) throw std::invalid_argument("region: missing \"params\"");
  const nlohmann::json& p = j["params"];
  const std::string kind = j["kind"].get<std::string>();
  GeomRegion r;
  auto num = [&p](const char* key) { return detail::require_number(p, key, "region params"); };
  if (kind == "disk") {
    detail::check_fields(p, {"cx", "cy", "r"}, "disk params", mode, warnings);
    r.shape = Disk{{num("cx"), num("cy")}, num("r")};
  } else if (kind == "rect") {
    detail::check_fields(p, {"xmin", "ymin", "xmax", "ymax"}, "rect params", mode, warnings);
    r.shape = Rect{{num("xmin"), num("ymin")}, {num("xmax"), num("ymax")}};
  } else if (kind == "box") {
    detail::check_fields(p, {"xmin", "ymin", "zmin", "xmax", "ymax", "zmax"}, "box params", mode,
                         warnings);
    r.shape = Box{{num("xmin"), num("ymin"), num("zmin")}, {num("xmax"), num("ymax"), num("zmax")}};
  } else if (kind == "triangle") {
    detail::check_fields(p, {"ax", "ay", "bx", "by", "cx", "cy"}, "triangle params", mode,
                         warnings);
    r.shape = Triangle{{num("ax"), num("ay")}, {num("bx"), num("by")}, {num("cx"), num("cy")}};
  } else if (kind == "halfspace3") {
    detail::check_fields(p, {"a", "b", "c"}, "halfspace params", mode, warnings);
    r.shape = Halfspace3{num("a"), num("b"), num("c")};
  } else if (kind == "vertical_ray3") {
    detail::check_fields(p, {"x", "y", "z", "up"}, "ray params", mode, warnings);
    VerticalRay3 v;
    v.apex = {num("x"), num("y"), num("z")};
    v.up = p.contains("up") ? p["up"].get<bool>() : true;
    r.shape = v;
  } else {
    throw std::invalid_argument("region: unknown kind \"" + kind + "\"");
  }
  if (j.contains("w")) r.weight = j["w"].get<double>();
  if (j.contains("cap")) r.capacity = j["cap"].get<int>();
  validate_region(r.shape);
  return r;
}

inline nlohmann::json geometric_to_json(const GeometricInstance& inst) {
  nlohmann::json j;
  j["direction"] =
      inst.direction == PackDirection::pack_regions ? "pack_regions" : "pack_points";
  if (!inst.region_class.empty()) j["class"] = inst.region_class;
  j["points"] = nlohmann::json::array();
  for (const GeomPoint& p : inst.points) {
    nlohmann::json q = {{"x", p.x}, {"y", p.y}};
    if (p.has_z) q["z"] = p.z;
    if (inst.direction == PackDirection::pack_regions)
      q["cap"] = p.capacity;
    else
      q["w"] = p.weight;
    j["points"].push_back(q);
  }
  j["regions"] = nlohmann::json::array();
  for (const GeomRegion& r : inst.regions) j["regions"].push_back(region_to_json(r, inst.direction));
  return j;
}

inline GeometricInstance geometric_from_json(const nlohmann::json& j,
                                             ParseMode mode = ParseMode::strict,
                                             std::vector<std::string>* warnings = nullptr) {
  detail::check_fields(j, {"direction", "points", "regions", "class"}, "instance", mode, warnings);
  if (!j.contains("direction") || !j["direction"].is_string())
    throw std::invalid_argument("instance: missing \"direction\"");
  GeometricInstance inst;
  const std::string dir = j["direction"].get<std::string>();
  if (dir == "pack_regions")
    inst.direction = PackDirection::pack_regions;
  else if (dir == "pack_points")
    inst.direction = PackDirection::pack_points;
  else
    throw std::invalid_argument("instance: direction must be pack_regions or pack_points");
  if (j.contains("class")) inst.region_class = j["class"].get<std::string>();
  if (j.contains("points")) {
    for (const auto& q : j["points"]) {
      detail::check_fields(q, {"x", "y", "z", "cap", "w"}, "point", mode, warnings);
      GeomPoint p;
      p.x = detail::require_number(q, "x", "point");
      p.y = detail::require_number(q, "y", "point");
      if (q.contains("z")) {
        p.z = q["z"].get<double>();
        p.has_z = true;
      }
      if (q.contains("cap")) p.capacity = q["cap"].get<int>();
      if (q.contains("w")) p.weight = q["w"].get<double>();
      inst.points.push_back(p);
    }
  }
  if (j.contains("regions"))
    for (const auto& r : j["regions"]) inst.regions.push_back(region_from_json(r, mode, warnings));
  return inst;
}

// True if the document looks like a raw hypergraph rather than a geometric
// instance.
inline bool json_is_hypergraph(const nlohmann::json& j) {
  return j.is_object() && j.contains("vertices");
}

// ---------------------------------------------------------------------------
// Generator specs.

inline GeneratorSpec generator_spec_from_json(const nlohmann::json& j,
                                              ParseMode mode = ParseMode::strict,
                                              std::vector<std::string>* warnings = nullptr) {
  detail::check_fields(j,
                       {"kind", "n_regions", "n_points", "cap_range", "weight_range",
                        "fatness_bound", "seed", "direction", "triples", "n_graph_vertices",
                        "graph_edges"},
                       "generator spec", mode, warnings);
  GeneratorSpec spec;
  if (!j.contains("kind") || !j["kind"].is_string())
    throw std::invalid_argument("generator spec: missing \"kind\"");
  spec.kind = j["kind"].get<std::string>();
  if (!j.contains("seed")) throw std::invalid_argument("generator spec: \"seed\" is required");
  spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("n_regions")) spec.n_regions = j["n_regions"].get<int>();
  if (j.contains("n_points")) spec.n_points = j["n_points"].get<int>();
  if (j.contains("cap_range")) {
    const auto& r = j["cap_range"];
    if (!r.is_array() || r.size() != 2)
      throw std::invalid_argument("generator spec: cap_range must be [lo, hi]");
    spec.cap_range = {r[0].get<int>(), r[1].get<int>()};
  }
  if (j.contains("weight_range")) {
    const auto& r = j["weight_range"];
    if (!r.is_array() || r.size() != 2)
      throw std::invalid_argument("generator spec: weight_range must be [lo, hi]");
    spec.weight_range = {r[0].get<double>(), r[1].get<double>()};
  }
  if (j.contains("fatness_bound")) spec.fatness_bound = j["fatness_bound"].get<double>();
  if (j.contains("direction")) {
    const std::string d = j["direction"].get<std::string>();
    if (d == "pack_regions")
      spec.direction = PackDirection::pack_regions;
    else if (d == "pack_points")
      spec.direction = PackDirection::pack_points;
    else
      throw std::invalid_argument("generator spec: bad direction");
  }
  if (j.contains("triples"))
    for (const auto& t : j["triples"]) {
      if (!t.is_array() || t.size() != 3)
        throw std::invalid_argument("generator spec: each triple must be [a, b, c]");
      spec.triples.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
  if (j.contains("n_graph_vertices")) spec.n_graph_vertices = j["n_graph_vertices"].get<int>();
  if (j.contains("graph_edges"))
    for (const auto& e : j["graph_edges"]) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("generator spec: each graph edge must be [u, v]");
      spec.graph_edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  return spec;
}

inline nlohmann::json generator_spec_to_json(const GeneratorSpec& spec) {
  nlohmann::json j;
  j["kind"] = spec.kind;
  j["n_regions"] = spec.n_regions;
  j["n_points"] = spec.n_points;
  j["cap_range"] = {spec.cap_range.first, spec.cap_range.second};
  j["weight_range"] = {spec.weight_range.first, spec.weight_range.second};
  j["fatness_bound"] = spec.fatness_bound;
  j["seed"] = spec.seed;
  if (spec.direction)
    j["direction"] =
        *spec.direction == PackDirection::pack_regions ? "pack_regions" : "pack_points";
  if (!spec.triples.empty()) {
    j["triples"] = nlohmann::json::array();
    for (const auto& t : spec.triples) j["triples"].push_back({t[0], t[1], t[2]});
  }
  if (spec.n_graph_vertices > 0) j["n_graph_vertices"] = spec.n_graph_vertices;
  if (!spec.graph_edges.empty()) {
    j["graph_edges"] = nlohmann::json::array();
    for (const auto& e : spec.graph_edges) j["graph_edges"].push_back({e.first, e.second});
  }
  return j;
}

// ---------------------------------------------------------------------------
// Solver configuration.

inline SolverConfig solver_config_from_json(const nlohmann::json& j,
                                            ParseMode mode = ParseMode::strict,
                                            std::vector<std::string>* warnings = nullptr) {
  detail::check_fields(j,
                       {"alpha", "scale_override", "gamma_override", "region_class", "criterion",
                        "violation_samples", "trials", "max_sparsify_attempts", "lp_tol", "seed",
                        "threads"},
                       "solver config", mode, warnings);
  SolverConfig c;
  if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
  if (j.contains("scale_override") && !j["scale_override"].is_null())
    c.scale_override = j["scale_override"].get<double>();
  if (j.contains("gamma_override") && !j["gamma_override"].is_null())
    c.gamma_override = j["gamma_override"].get<double>();
  if (j.contains("region_class")) c.region_class = j["region_class"].get<std::string>();
  if (j.contains("criterion")) {
    const std::string s = j["criterion"].get<std::string>();
    if (s == "exact_resistance")
      c.criterion = OrderingCriterion::exact_resistance;
    else if (s == "estimated_violation")
      c.criterion = OrderingCriterion::estimated_violation;
    else
      throw std::invalid_argument("solver config: bad criterion");
  }
  if (j.contains("violation_samples")) c.violation_samples = j["violation_samples"].get<int>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("max_sparsify_attempts"))
    c.max_sparsify_attempts = j["max_sparsify_attempts"].get<int>();
  if (j.contains("lp_tol")) c.lp_tol = j["lp_tol"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) c.threads = j["threads"].get<int>();
  return c;
}

inline nlohmann::json solver_config_to_json(const SolverConfig& c) {
  nlohmann::json j;
  j["alpha"] = c.alpha;
  if (c.scale_override) j["scale_override"] = *c.scale_override;
  if (c.gamma_override) j["gamma_override"] = *c.gamma_override;
  j["region_class"] = c.region_class;
  j["criterion"] = c.criterion == OrderingCriterion::exact_resistance ? "exact_resistance"
                                                                      : "estimated_violation";
  j["violation_samples"] = c.violation_samples;
  j["trials"] = c.trials;
  j["max_sparsify_attempts"] = c.max_sparsify_attempts;
  j["lp_tol"] = c.lp_tol;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

// FNV-1a digest used as a short instance identifier in reports.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace geopack
