#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "geopack/core.hpp"

// Geometric primitives, closed-set containment predicates, the paraboloid
// lifting / plane duality transforms, and compilation of geometric instances
// into capacitated hypergraphs in both packing directions.

namespace geopack {

struct Point2 {
  double x = 0.0, y = 0.0;
};

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct Disk {
  Point2 center;
  double radius = 1.0;
};

struct Rect {
  Point2 lo, hi;
};

struct Box {
  Point3 lo, hi;
};

struct Triangle {
  Point2 a, b, c;
};

// Region of space below the plane z = a x + b y + c.
struct Halfspace3 {
  double a = 0.0, b = 0.0, c = 0.0;
};

// Vertical ray from the apex, pointing up (+z) or down.
struct VerticalRay3 {
  Point3 apex;
  bool up = true;
};

using Region = std::variant<Disk, Rect, Box, Triangle, Halfspace3, VerticalRay3>;

struct GeomPoint {
  double x = 0.0, y = 0.0, z = 0.0;
  bool has_z = false;
  double weight = 1.0;  // used when points are the chosen objects
  int capacity = 1;     // used when points bound the chosen regions
};

struct GeomRegion {
  Region shape;
  double weight = 1.0;
  int capacity = 1;
};

enum class PackDirection { pack_regions, pack_points };

struct GeometricInstance {
  PackDirection direction = PackDirection::pack_regions;
  std::vector<GeomPoint> points;
  std::vector<GeomRegion> regions;
  std::string region_class;
};

// ---------------------------------------------------------------------------
// Shared floating-point evaluators. All disk/plane predicates funnel through
// these two expressions so the lifted form of a test is bit-identical to the
// planar form.

inline double lift_z(double x, double y) { return x * x + y * y; }

inline double plane_eval(double a, double b, double c, double x, double y) {
  return a * x + b * y + c;
}

inline bool below_plane(double a, double b, double c, double px, double py, double pz) {
  return pz <= plane_eval(a, b, c, px, py);
}

inline Halfspace3 lift_disk(const Disk& d) {
  return Halfspace3{2.0 * d.center.x, 2.0 * d.center.y,
                    (d.radius * d.radius - d.center.x * d.center.x) - d.center.y * d.center.y};
}

inline Point3 lift_point(double x, double y) { return Point3{x, y, lift_z(x, y)}; }

// Plane duality: the plane z = a x + b y + c maps to the point (a, b, -c) and
// the point (x, y, z) maps to the plane z' = x a + y b - z.
inline Point3 dual_point_of_plane(const Halfspace3& h) { return Point3{h.a, h.b, -h.c}; }

inline Halfspace3 dual_plane_of_point(const Point3& p) { return Halfspace3{p.x, p.y, -p.z}; }

// ---------------------------------------------------------------------------
// Robust orientation: sign of the cross product (b-a) x (c-a) with a floating
// point filter and an exact rational fallback.

namespace detail {
inline int orientation_exact(const Point2& a, const Point2& b, const Point2& c) {
  using rational = boost::multiprecision::cpp_rational;
  const rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  const rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  if (det > 0) return 1;
  if (det < 0) return -1;
  return 0;
}
}  // namespace detail

inline int orientation(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (b.x - a.x) * (c.y - a.y);
  const double detright = (b.y - a.y) * (c.x - a.x);
  const double det = detleft - detright;
  const double detsum = std::fabs(detleft) + std::fabs(detright);
  const double errbound = 3.3306690738754716e-16 * detsum;
  if (det > errbound) return 1;
  if (det < -errbound) return -1;
  return detail::orientation_exact(a, b, c);
}

// ---------------------------------------------------------------------------
// Region validity and containment (closed sets, boundaries count as inside).

inline bool region_is_3d(const Region& r) {
  return std::holds_alternative<Box>(r) || std::holds_alternative<Halfspace3>(r) ||
         std::holds_alternative<VerticalRay3>(r);
}

inline void validate_region(const Region& r) {
  struct Checker {
    void operator()(const Disk& d) const {
      if (!(d.radius > 0.0) || !std::isfinite(d.radius) || !std::isfinite(d.center.x) ||
          !std::isfinite(d.center.y))
        throw std::invalid_argument("disk must have finite center and positive radius");
    }
    void operator()(const Rect& r) const {
      if (!(r.lo.x <= r.hi.x) || !(r.lo.y <= r.hi.y))
        throw std::invalid_argument("rect corners must satisfy lo <= hi");
    }
    void operator()(const Box& b) const {
      if (!(b.lo.x <= b.hi.x) || !(b.lo.y <= b.hi.y) || !(b.lo.z <= b.hi.z))
        throw std::invalid_argument("box corners must satisfy lo <= hi");
    }
    void operator()(const Triangle& t) const {
      if (orientation(t.a, t.b, t.c) == 0)
        throw std::invalid_argument("triangle must be non-degenerate");
    }
    void operator()(const Halfspace3& h) const {
      if (!std::isfinite(h.a) || !std::isfinite(h.b) || !std::isfinite(h.c))
        throw std::invalid_argument("halfspace coefficients must be finite");
    }
    void operator()(const VerticalRay3& v) const {
      if (!std::isfinite(v.apex.x) || !std::isfinite(v.apex.y) || !std::isfinite(v.apex.z))
        throw std::invalid_argument("ray apex must be finite");
    }
  };
  std::visit(Checker{}, r);
}

inline bool disk_contains(const Disk& d, double px, double py) {
  const Halfspace3 h = lift_disk(d);
  return below_plane(h.a, h.b, h.c, px, py, lift_z(px, py));
}

inline bool rect_contains(const Rect& r, double px, double py) {
  return r.lo.x <= px && px <= r.hi.x && r.lo.y <= py && py <= r.hi.y;
}

inline bool box_contains(const Box& b, double px, double py, double pz) {
  return b.lo.x <= px && px <= b.hi.x && b.lo.y <= py && py <= b.hi.y && b.lo.z <= pz &&
         pz <= b.hi.z;
}

inline bool triangle_contains(const Triangle& t, double px, double py) {
  const Point2 p{px, py};
  const int s1 = orientation(t.a, t.b, p);
  const int s2 = orientation(t.b, t.c, p);
  const int s3 = orientation(t.c, t.a, p);
  return (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
}

inline bool region_contains(const Region& r, const GeomPoint& p) {
  if (region_is_3d(r) != p.has_z)
    throw std::invalid_argument("region_contains: point/region dimension mismatch");
  struct Checker {
    const GeomPoint& p;
    bool operator()(const Disk& d) const { return disk_contains(d, p.x, p.y); }
    bool operator()(const Rect& r) const { return rect_contains(r, p.x, p.y); }
    bool operator()(const Box& b) const { return box_contains(b, p.x, p.y, p.z); }
    bool operator()(const Triangle& t) const { return triangle_contains(t, p.x, p.y); }
    bool operator()(const Halfspace3& h) const { return below_plane(h.a, h.b, h.c, p.x, p.y, p.z); }
    bool operator()(const VerticalRay3& v) const {
      if (p.x != v.apex.x || p.y != v.apex.y) return false;
      return v.up ? p.z >= v.apex.z : p.z <= v.apex.z;
    }
  };
  return std::visit(Checker{p}, r);
}

// Longest edge divided by the height of the triangle onto that edge.
inline double triangle_fatness(const Triangle& t) {
  if (orientation(t.a, t.b, t.c) == 0)
    throw std::invalid_argument("triangle_fatness: degenerate triangle");
  auto sq = [](double v) { return v * v; };
  const double ab = sq(t.b.x - t.a.x) + sq(t.b.y - t.a.y);
  const double bc = sq(t.c.x - t.b.x) + sq(t.c.y - t.b.y);
  const double ca = sq(t.a.x - t.c.x) + sq(t.a.y - t.c.y);
  const double longest_sq = std::max(ab, std::max(bc, ca));
  const double det = (t.b.x - t.a.x) * (t.c.y - t.a.y) - (t.b.y - t.a.y) * (t.c.x - t.a.x);
  const double area = std::fabs(det) / 2.0;
  return longest_sq / (2.0 * area);  // L / (2 area / L)
}

// ---------------------------------------------------------------------------
// Instance compilation.

struct BuiltHypergraph {
  Hypergraph hypergraph;
  std::vector<int> vertex_source;  // region index (pack_regions) or point index (pack_points)
  std::vector<int> edge_source;    // point index (pack_regions) or region index (pack_points)
};

inline BuiltHypergraph build_hypergraph(const GeometricInstance& inst) {
  for (const GeomRegion& r : inst.regions) validate_region(r.shape);
  BuiltHypergraph out;
  Hypergraph& h = out.hypergraph;
  if (inst.direction == PackDirection::pack_regions) {
    h.vertex_weights.reserve(inst.regions.size());
    for (size_t j = 0; j < inst.regions.size(); ++j) {
      h.vertex_weights.push_back(inst.regions[j].weight);
      h.vertex_labels.push_back("r" + std::to_string(j));
      out.vertex_source.push_back(static_cast<int>(j));
    }
    for (size_t i = 0; i < inst.points.size(); ++i) {
      Hyperedge e;
      for (size_t j = 0; j < inst.regions.size(); ++j)
        if (region_contains(inst.regions[j].shape, inst.points[i]))
          e.vertices.push_back(static_cast<int>(j));
      if (e.vertices.empty()) continue;
      e.capacity = inst.points[i].capacity;
      e.label = "p" + std::to_string(i);
      h.edges.push_back(std::move(e));
      out.edge_source.push_back(static_cast<int>(i));
    }
  } else {
    h.vertex_weights.reserve(inst.points.size());
    for (size_t i = 0; i < inst.points.size(); ++i) {
      h.vertex_weights.push_back(inst.points[i].weight);
      h.vertex_labels.push_back("p" + std::to_string(i));
      out.vertex_source.push_back(static_cast<int>(i));
    }
    for (size_t j = 0; j < inst.regions.size(); ++j) {
      Hyperedge e;
      for (size_t i = 0; i < inst.points.size(); ++i)
        if (region_contains(inst.regions[j].shape, inst.points[i]))
          e.vertices.push_back(static_cast<int>(i));
      if (e.vertices.empty()) continue;
      e.capacity = inst.regions[j].capacity;
      e.label = "r" + std::to_string(j);
      h.edges.push_back(std::move(e));
      out.edge_source.push_back(static_cast<int>(j));
    }
  }
  h.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Lifting and duality for disk instances.

// Stage one: points go to the paraboloid, disks become lower halfspaces.
// Incidence is preserved bit-for-bit because the planar disk test already
// evaluates the lifted expression.
inline GeometricInstance lift_disk_instance(const GeometricInstance& inst) {
  GeometricInstance out;
  out.direction = inst.direction;
  out.region_class = inst.region_class;
  out.points.reserve(inst.points.size());
  for (const GeomPoint& p : inst.points) {
    if (p.has_z) throw std::invalid_argument("lift: input points must be planar");
    GeomPoint q = p;
    q.z = lift_z(p.x, p.y);
    q.has_z = true;
    out.points.push_back(q);
  }
  out.regions.reserve(inst.regions.size());
  for (const GeomRegion& r : inst.regions) {
    const Disk* d = std::get_if<Disk>(&r.shape);
    if (d == nullptr) throw std::invalid_argument("lift: all regions must be disks");
    GeomRegion s = r;
    s.shape = lift_disk(*d);
    out.regions.push_back(s);
  }
  return out;
}

// Stage two on top of stage one: every lifted point becomes a plane region and
// every disk's bounding plane becomes a point, swapping the packing direction.
// Each object keeps its own weight/capacity payload.
inline GeometricInstance lift_and_dualize(const GeometricInstance& inst) {
  const GeometricInstance lifted = lift_disk_instance(inst);
  GeometricInstance out;
  out.direction = inst.direction == PackDirection::pack_regions ? PackDirection::pack_points
                                                                : PackDirection::pack_regions;
  out.region_class = inst.region_class;
  out.regions.reserve(lifted.points.size());
  for (const GeomPoint& p : lifted.points) {
    GeomRegion r;
    r.shape = dual_plane_of_point(Point3{p.x, p.y, p.z});
    r.weight = p.weight;
    r.capacity = p.capacity;
    out.regions.push_back(r);
  }
  out.points.reserve(lifted.regions.size());
  for (const GeomRegion& r : lifted.regions) {
    const Halfspace3& h = std::get<Halfspace3>(r.shape);
    const Point3 q = dual_point_of_plane(h);
    GeomPoint p;
    p.x = q.x;
    p.y = q.y;
    p.z = q.z;
    p.has_z = true;
    p.weight = r.weight;
    p.capacity = r.capacity;
    out.points.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Depth histogram over sampled arrangement faces: two samples with the same
// containing-region set count as one face.

inline std::map<int, int> count_faces_by_depth(const std::vector<Region>& regions,
                                               const std::vector<GeomPoint>& sample_points) {
  std::set<std::vector<int>> signatures;
  for (const GeomPoint& p : sample_points) {
    std::vector<int> sig;
    for (size_t j = 0; j < regions.size(); ++j)
      if (region_contains(regions[j], p)) sig.push_back(static_cast<int>(j));
    signatures.insert(std::move(sig));
  }
  std::map<int, int> histogram;
  for (const std::vector<int>& sig : signatures) ++histogram[static_cast<int>(sig.size())];
  return histogram;
}

}  // namespace geopack
