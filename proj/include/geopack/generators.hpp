#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geopack/core.hpp"
#include "geopack/geometry.hpp"
#include "geopack/rng.hpp"

// Seeded instance generators: random geometric families plus the adversarial
// constructions that embed 3-dimensional matching and graph independent set
// into packing instances.

namespace geopack {

struct GeneratorSpec {
  std::string kind;  // random_disks | random_rects | random_boxes | random_fat_triangles |
                     // flower | k3_segments | tri_matching_hard | graph_is_hard
  int n_regions = 10;
  int n_points = 20;
  std::pair<int, int> cap_range = {1, 3};
  std::pair<double, double> weight_range = {1.0, 1.0};
  double fatness_bound = 2.0;
  std::uint64_t seed = 0;
  std::optional<PackDirection> direction;          // override for the random families
  std::vector<std::array<int, 3>> triples;         // explicit input for tri_matching_hard
  int n_graph_vertices = 0;                        // explicit input for graph_is_hard
  std::vector<std::pair<int, int>> graph_edges;
};

namespace detail {

inline void validate_generator_spec(const GeneratorSpec& spec) {
  static const std::set<std::string> kinds = {
      "random_disks",  "random_rects", "random_boxes",      "random_fat_triangles",
      "flower",        "k3_segments",  "tri_matching_hard", "graph_is_hard"};
  if (kinds.find(spec.kind) == kinds.end())
    throw std::invalid_argument("unknown generator kind: " + spec.kind);
  if (spec.n_regions < 0 || spec.n_points < 0)
    throw std::invalid_argument("generator sizes must be non-negative");
  if (spec.cap_range.first < 1 || spec.cap_range.second < spec.cap_range.first)
    throw std::invalid_argument("cap_range must satisfy 1 <= lo <= hi");
  if (!(spec.weight_range.first >= 0.0) || !(spec.weight_range.second >= spec.weight_range.first))
    throw std::invalid_argument("weight_range must satisfy 0 <= lo <= hi");
  for (const auto& t : spec.triples)
    if (t[0] < 0 || t[1] < 0 || t[2] < 0)
      throw std::invalid_argument("triple indices must be non-negative");
  if (spec.n_graph_vertices < 0)
    throw std::invalid_argument("graph vertex count must be non-negative");
  for (const auto& e : spec.graph_edges)
    if (e.first < 0 || e.second < 0 || e.first == e.second)
      throw std::invalid_argument("graph edges must join two distinct non-negative vertices");
}

inline GeomPoint sample_point(Rng& rng, bool three_d, const GeneratorSpec& spec) {
  GeomPoint p;
  p.x = rng.next_double();
  p.y = rng.next_double();
  if (three_d) {
    p.z = rng.next_double();
    p.has_z = true;
  }
  p.capacity = rng.uniform_int(spec.cap_range.first, spec.cap_range.second);
  p.weight = rng.uniform(spec.weight_range.first, spec.weight_range.second);
  return p;
}

inline void stamp_region_payload(GeomRegion& r, Rng& rng, const GeneratorSpec& spec) {
  r.capacity = rng.uniform_int(spec.cap_range.first, spec.cap_range.second);
  r.weight = rng.uniform(spec.weight_range.first, spec.weight_range.second);
}

inline GeometricInstance random_family(const GeneratorSpec& spec) {
  Rng rng(spec.seed, RngStream::instance_gen);
  GeometricInstance inst;
  const bool three_d = spec.kind == "random_boxes";
  inst.direction = spec.direction.value_or(PackDirection::pack_regions);
  for (int i = 0; i < spec.n_points; ++i) inst.points.push_back(sample_point(rng, three_d, spec));
  for (int j = 0; j < spec.n_regions; ++j) {
    GeomRegion r;
    if (spec.kind == "random_disks") {
      Disk d;
      d.center = {rng.next_double(), rng.next_double()};
      d.radius = rng.uniform(0.08, 0.30);
      r.shape = d;
    } else if (spec.kind == "random_rects") {
      const double cx = rng.next_double(), cy = rng.next_double();
      const double hx = rng.uniform(0.03, 0.20), hy = rng.uniform(0.03, 0.20);
      r.shape = Rect{{cx - hx, cy - hy}, {cx + hx, cy + hy}};
    } else if (spec.kind == "random_boxes") {
      const double cx = rng.next_double(), cy = rng.next_double(), cz = rng.next_double();
      const double hx = rng.uniform(0.05, 0.25), hy = rng.uniform(0.05, 0.25),
                   hz = rng.uniform(0.05, 0.25);
      r.shape = Box{{cx - hx, cy - hy, cz - hz}, {cx + hx, cy + hy, cz + hz}};
    } else {  // random_fat_triangles
      if (spec.fatness_bound < 1.16)
        throw std::invalid_argument("fatness_bound must be at least 1.16");
      Triangle best{};
      bool have = false;
      for (int attempt = 0; attempt < 100 && !have; ++attempt) {
        const double cx = rng.next_double(), cy = rng.next_double();
        const double side = rng.uniform(0.15, 0.50);
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        Triangle t;
        Point2* vs[3] = {&t.a, &t.b, &t.c};
        for (int v = 0; v < 3; ++v) {
          const double ang = theta + v * 2.0 * M_PI / 3.0;
          vs[v]->x = cx + side * 0.577 * std::cos(ang) + side * 0.05 * (rng.next_double() - 0.5);
          vs[v]->y = cy + side * 0.577 * std::sin(ang) + side * 0.05 * (rng.next_double() - 0.5);
        }
        if (orientation(t.a, t.b, t.c) != 0 && triangle_fatness(t) <= spec.fatness_bound) {
          best = t;
          have = true;
        }
      }
      if (!have) throw std::runtime_error("failed to sample a fat triangle within bound");
      r.shape = best;
    }
    stamp_region_payload(r, rng, spec);
    inst.regions.push_back(std::move(r));
  }
  inst.region_class = spec.kind == "random_disks"   ? "disk"
                      : spec.kind == "random_rects" ? "rect"
                      : spec.kind == "random_boxes" ? "box"
                                                    : "fat_triangle";
  return inst;
}

inline GeometricInstance flower_instance() {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.region_class = "disk";
  inst.regions.push_back({Disk{{-0.3, 0.0}, 0.5}, 1.0, 1});
  inst.regions.push_back({Disk{{0.3, 0.0}, 0.5}, 1.0, 1});
  GeomPoint p;
  p.x = 0.0;
  p.y = 0.0;
  p.capacity = 2;
  inst.points.push_back(p);
  return inst;
}

// Thin triangle hugging the segment pq, widened 25% past both ends, with the
// slab side chosen so both endpoints sit strictly inside.
inline Triangle sliver_around_segment(const Point2& p, const Point2& q) {
  const double dx = q.x - p.x, dy = q.y - p.y;
  const double len = std::sqrt(dx * dx + dy * dy);
  const double nx = -dy / len, ny = dx / len;  // unit normal
  Triangle t;
  t.a = {p.x - 0.25 * dx + 0.02 * len * nx, p.y - 0.25 * dy + 0.02 * len * ny};
  t.b = {q.x + 0.25 * dx + 0.02 * len * nx, q.y + 0.25 * dy + 0.02 * len * ny};
  t.c = {p.x + 0.5 * dx - 0.06 * len * nx, p.y + 0.5 * dy - 0.06 * len * ny};
  return t;
}

inline GeometricInstance k3_instance() {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.region_class = "generic";
  const Point2 p01{0.0, 0.0}, p12{1.0, 0.0}, p02{0.5, 1.0};
  inst.regions.push_back({sliver_around_segment(p01, p12), 1.0, 1});
  inst.regions.push_back({sliver_around_segment(p12, p02), 1.0, 1});
  inst.regions.push_back({sliver_around_segment(p02, p01), 1.0, 1});
  for (const Point2& p : {p01, p12, p02}) {
    GeomPoint g;
    g.x = p.x;
    g.y = p.y;
    g.capacity = 1;
    inst.points.push_back(g);
  }
  // The three crossing points must realize the triangle graph exactly.
  const BuiltHypergraph built = build_hypergraph(inst);
  if (built.hypergraph.num_vertices() != 3 || built.hypergraph.num_edges() != 3)
    throw std::logic_error("k3 gadget verification failed: wrong shape");
  std::set<std::vector<int>> edge_sets;
  for (const Hyperedge& e : built.hypergraph.edges) {
    if (e.capacity != 1 || e.vertices.size() != 2)
      throw std::logic_error("k3 gadget verification failed: bad edge");
    edge_sets.insert(e.vertices);
  }
  if (edge_sets != std::set<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}})
    throw std::logic_error("k3 gadget verification failed: wrong incidences");
  return inst;
}

inline GeometricInstance tri_matching_instance(const GeneratorSpec& spec) {
  Rng rng(spec.seed, RngStream::instance_gen);
  std::vector<std::array<int, 3>> triples = spec.triples;
  if (triples.empty()) {
    const int count = std::max(1, spec.n_regions);
    const int class_size = std::max(2, (spec.n_points + 2) / 3);
    std::set<std::array<int, 3>> seen;
    for (int i = 0; i < count; ++i) {
      for (int attempt = 0; attempt < 64; ++attempt) {
        std::array<int, 3> t = {static_cast<int>(rng.next_below(class_size)),
                                static_cast<int>(rng.next_below(class_size)),
                                static_cast<int>(rng.next_below(class_size))};
        if (seen.insert(t).second) {
          triples.push_back(t);
          break;
        }
      }
    }
  }
  if (triples.empty()) throw std::invalid_argument("tri_matching_hard: no triples");
  int size_a = 0, size_b = 0, size_c = 0;
  for (const auto& t : triples) {
    size_a = std::max(size_a, t[0] + 1);
    size_b = std::max(size_b, t[1] + 1);
    size_c = std::max(size_c, t[2] + 1);
  }

  // One representative point per class element, the three classes on short
  // arcs 120 degrees apart; every class arc spans less than 5 degrees.
  const double spread = 2.4 * M_PI / 180.0;
  auto place_class = [&rng, spread](double center_deg, int size, std::vector<Point2>& out) {
    const double center = center_deg * M_PI / 180.0;
    for (int i = 0; i < size; ++i) {
      const double frac = size == 1 ? 0.0 : (static_cast<double>(i) / (size - 1) - 0.5) * 2.0;
      const double jitter = (rng.next_double() - 0.5) * spread * 0.05;
      const double ang = center + frac * spread + jitter;
      out.push_back({std::cos(ang), std::sin(ang)});
    }
  };
  std::vector<Point2> reps_a, reps_b, reps_c;
  place_class(90.0, size_a, reps_a);
  place_class(210.0, size_b, reps_b);
  place_class(330.0, size_c, reps_c);

  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.region_class = "similar_fat";
  auto push_point = [&inst](const Point2& p) {
    GeomPoint g;
    g.x = p.x;
    g.y = p.y;
    g.capacity = 1;
    inst.points.push_back(g);
  };
  for (const Point2& p : reps_a) push_point(p);
  for (const Point2& p : reps_b) push_point(p);
  for (const Point2& p : reps_c) push_point(p);
  for (const auto& t : triples) {
    Triangle tr{reps_a[static_cast<size_t>(t[0])], reps_b[static_cast<size_t>(t[1])],
                reps_c[static_cast<size_t>(t[2])]};
    inst.regions.push_back({tr, 1.0, 1});
  }
  // Inscribed triangles must contain exactly their three class representatives.
  for (size_t j = 0; j < inst.regions.size(); ++j) {
    int contained = 0;
    for (const GeomPoint& g : inst.points)
      if (region_contains(inst.regions[j].shape, g)) ++contained;
    const auto& t = triples[j];
    const bool own = region_contains(inst.regions[j].shape, inst.points[static_cast<size_t>(t[0])]) &&
                     region_contains(inst.regions[j].shape,
                                     inst.points[static_cast<size_t>(size_a + t[1])]) &&
                     region_contains(inst.regions[j].shape,
                                     inst.points[static_cast<size_t>(size_a + size_b + t[2])]);
    if (contained != 3 || !own)
      throw std::logic_error("tri_matching gadget verification failed");
  }
  return inst;
}

inline GeometricInstance graph_is_instance(const GeneratorSpec& spec) {
  Rng rng(spec.seed, RngStream::instance_gen);
  int n = spec.n_graph_vertices;
  std::vector<std::pair<int, int>> edges = spec.graph_edges;
  if (n == 0 && edges.empty()) {
    n = std::max(2, spec.n_points);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.next_double() < 0.3) edges.emplace_back(u, v);
  }
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    n = std::max(n, e.second + 1);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (n < 1) throw std::invalid_argument("graph_is_hard: empty graph");

  // All vertex points live on a short arc, so every edge chord is shallow.
  // With the apex dropped toward the circle center, points between the two
  // endpoints stay on the bulge side of the chord and points beyond them
  // leave the triangle's slab: each triangle contains exactly its endpoints.
  const double arc = 0.4;
  std::vector<Point2> pts;
  for (int i = 0; i < n; ++i) {
    const double base = n == 1 ? 0.0 : (static_cast<double>(i) / (n - 1) - 0.5) * arc;
    const double jitter = (rng.next_double() - 0.5) * (arc / std::max(1, n - 1)) * 0.2;
    const double ang = base + jitter;
    pts.push_back({std::cos(ang), std::sin(ang)});
  }

  GeometricInstance inst;
  inst.direction = PackDirection::pack_points;
  inst.region_class = "fat_triangle";
  for (const Point2& p : pts) {
    GeomPoint g;
    g.x = p.x;
    g.y = p.y;
    g.weight = 1.0;
    inst.points.push_back(g);
  }
  for (const auto& e : edges) {
    const Point2& u = pts[static_cast<size_t>(e.first)];
    const Point2& v = pts[static_cast<size_t>(e.second)];
    const double mx = (u.x + v.x) / 2.0, my = (u.y + v.y) / 2.0;
    const double dx = v.x - u.x, dy = v.y - u.y;
    const double len = std::sqrt(dx * dx + dy * dy);
    const double mlen = std::sqrt(mx * mx + my * my);
    // unit normal pointing at the circle center, apex at half the chord length
    const double nx = -mx / mlen, ny = -my / mlen;
    Triangle t{u, v, {mx + nx * len / 2.0, my + ny * len / 2.0}};
    GeomRegion r;
    r.shape = t;
    r.capacity = 1;
    r.weight = 1.0;
    inst.regions.push_back(r);
  }
  // Verify each triangle keeps exactly its two endpoints.
  for (size_t j = 0; j < inst.regions.size(); ++j) {
    int contained = 0;
    for (const GeomPoint& g : inst.points)
      if (region_contains(inst.regions[j].shape, g)) ++contained;
    const bool own =
        region_contains(inst.regions[j].shape, inst.points[static_cast<size_t>(edges[j].first)]) &&
        region_contains(inst.regions[j].shape, inst.points[static_cast<size_t>(edges[j].second)]);
    if (contained != 2 || !own) throw std::logic_error("graph gadget verification failed");
  }
  return inst;
}

}  // namespace detail

inline GeometricInstance generate_instance(const GeneratorSpec& spec) {
  detail::validate_generator_spec(spec);
  if (spec.kind == "flower") return detail::flower_instance();
  if (spec.kind == "k3_segments") return detail::k3_instance();
  if (spec.kind == "tri_matching_hard") return detail::tri_matching_instance(spec);
  if (spec.kind == "graph_is_hard") return detail::graph_is_instance(spec);
  return detail::random_family(spec);
}

}  // namespace geopack
