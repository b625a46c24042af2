#include <boost/multiprecision/cpp_int.hpp>
#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "geopack/geometry.hpp"

using namespace geopack;

namespace {

// Independent exact orientation sign computed with arbitrary-precision
// rationals. Doubles convert exactly, so this has no rounding at all.
int orientation_rational(const Point2& a, const Point2& b, const Point2& c) {
  using boost::multiprecision::cpp_rational;
  const cpp_rational det = (cpp_rational(b.x) - cpp_rational(a.x)) *
                               (cpp_rational(c.y) - cpp_rational(a.y)) -
                           (cpp_rational(b.y) - cpp_rational(a.y)) *
                               (cpp_rational(c.x) - cpp_rational(a.x));
  if (det > 0) return 1;
  if (det < 0) return -1;
  return 0;
}

}  // namespace

TEST_CASE("orientation matches exact arithmetic on an adversarial grid") {
  // Perturbing a collinear triple by a few ulps produces determinants far
  // below double rounding error; the filtered predicate must still get the
  // exact sign for every cell of the grid.
  const Point2 q{12.0, 12.0};
  const Point2 r{24.0, 24.0};
  const double ulp = std::ldexp(1.0, -53);
  int nonzero = 0;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      const Point2 p{0.5 + static_cast<double>(i) * ulp, 0.5 + static_cast<double>(j) * ulp};
      const int got = orientation(p, q, r);
      const int want = orientation_rational(p, q, r);
      REQUIRE(got == want);
      if (want != 0) ++nonzero;
    }
  }
  REQUIRE(nonzero > 0);  // the grid is not all-collinear, so signs vary
}

TEST_CASE("orientation matches exact arithmetic on random triples") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Point2 a{coord(rng), coord(rng)};
    const Point2 b{coord(rng), coord(rng)};
    const Point2 c{coord(rng), coord(rng)};
    CHECK(orientation(a, b, c) == orientation_rational(a, b, c));
  }
}

TEST_CASE("containment predicates include their boundaries") {
  const Disk d{{0.0, 0.0}, 5.0};
  CHECK(disk_contains(d, 3.0, 4.0));  // exactly on the circle
  CHECK(disk_contains(d, 0.0, 0.0));
  CHECK(disk_contains(d, 5.0, 0.0));
  CHECK_FALSE(disk_contains(d, 3.0, 4.000001));
  CHECK_FALSE(disk_contains(d, 5.0001, 0.0));

  const Rect r{{1.0, 2.0}, {3.0, 4.0}};
  CHECK(rect_contains(r, 1.0, 2.0));
  CHECK(rect_contains(r, 3.0, 4.0));
  CHECK(rect_contains(r, 2.0, 3.0));
  CHECK_FALSE(rect_contains(r, 0.999, 3.0));
  CHECK_FALSE(rect_contains(r, 2.0, 4.001));

  const Box b{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
  CHECK(box_contains(b, 0.0, 0.0, 0.0));
  CHECK(box_contains(b, 1.0, 1.0, 1.0));
  CHECK(box_contains(b, 0.5, 0.5, 1.0));
  CHECK_FALSE(box_contains(b, 0.5, 0.5, 1.001));

  const Triangle t{{0.0, 0.0}, {4.0, 0.0}, {0.0, 4.0}};
  CHECK(triangle_contains(t, 0.0, 0.0));  // vertex
  CHECK(triangle_contains(t, 2.0, 0.0));  // edge midpoint
  CHECK(triangle_contains(t, 2.0, 2.0));  // hypotenuse midpoint
  CHECK(triangle_contains(t, 1.0, 1.0));  // interior
  CHECK_FALSE(triangle_contains(t, 2.1, 2.0));
  CHECK_FALSE(triangle_contains(t, -0.01, 1.0));

  // Winding order must not matter.
  const Triangle t_cw{{0.0, 0.0}, {0.0, 4.0}, {4.0, 0.0}};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coord(-1.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const double px = coord(rng), py = coord(rng);
    CHECK(triangle_contains(t, px, py) == triangle_contains(t_cw, px, py));
  }
}

TEST_CASE("3d region predicates and dimension checking") {
  const Halfspace3 hs{1.0, -2.0, 3.0};  // z <= x - 2y + 3
  GeomPoint p;
  p.x = 1.0;
  p.y = 1.0;
  p.z = 2.0;  // boundary: 1 - 2 + 3 = 2
  p.has_z = true;
  CHECK(region_contains(Region{hs}, p));
  p.z = 2.0000001;
  CHECK_FALSE(region_contains(Region{hs}, p));

  VerticalRay3 ray;
  ray.apex = Point3{1.0, 2.0, 3.0};
  ray.up = true;
  GeomPoint q;
  q.has_z = true;
  q.x = 1.0;
  q.y = 2.0;
  q.z = 3.0;
  CHECK(region_contains(Region{ray}, q));
  q.z = 10.0;
  CHECK(region_contains(Region{ray}, q));
  q.z = 2.9;
  CHECK_FALSE(region_contains(Region{ray}, q));
  ray.up = false;
  CHECK(region_contains(Region{ray}, q));
  q.x = 1.5;
  q.z = 3.0;
  CHECK_FALSE(region_contains(Region{ray}, q));

  // Planar point against a 3d region (and vice versa) is a usage error.
  GeomPoint flat;
  flat.x = 0.0;
  flat.y = 0.0;
  CHECK_THROWS_AS(region_contains(Region{hs}, flat), std::invalid_argument);
  GeomPoint tall;
  tall.has_z = true;
  CHECK_THROWS_AS(region_contains(Region{Disk{{0.0, 0.0}, 1.0}}, tall), std::invalid_argument);
}

TEST_CASE("region validation rejects malformed shapes") {
  CHECK_THROWS_AS(validate_region(Region{Disk{{0.0, 0.0}, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_region(Region{Disk{{0.0, 0.0}, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_region(Region{Rect{{1.0, 0.0}, {0.0, 1.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_region(Region{Box{{0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      validate_region(Region{Triangle{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}}),
      std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_region(Region{Halfspace3{inf, 0.0, 0.0}}), std::invalid_argument);
  CHECK_NOTHROW(validate_region(Region{Disk{{0.0, 0.0}, 1.0}}));
  CHECK_NOTHROW(validate_region(Region{Rect{{0.0, 0.0}, {0.0, 0.0}}}));  // degenerate but legal
}

TEST_CASE("triangle fatness has the expected closed forms") {
  // Right isosceles with legs 1: longest edge sqrt(2), height onto it
  // sqrt(2)/2, ratio exactly 2.
  const Triangle right{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  CHECK_THAT(triangle_fatness(right), Catch::Matchers::WithinAbs(2.0, 1e-12));

  // Equilateral: ratio 2/sqrt(3).
  const Triangle equi{{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}};
  CHECK_THAT(triangle_fatness(equi), Catch::Matchers::WithinAbs(2.0 / std::sqrt(3.0), 1e-9));

  // A sliver of height h over a unit base has fatness 1/h.
  const Triangle sliver{{0.0, 0.0}, {1.0, 0.0}, {0.5, 1e-3}};
  CHECK_THAT(triangle_fatness(sliver), Catch::Matchers::WithinRel(1e3, 1e-9));

  // Fatness never depends on rigid motion or labeling order.
  const Triangle relabeled{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}};
  CHECK_THAT(triangle_fatness(relabeled), Catch::Matchers::WithinAbs(2.0, 1e-12));

  CHECK_THROWS_AS(triangle_fatness(Triangle{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}),
                  std::invalid_argument);
}

TEST_CASE("build_hypergraph compiles incidences in both directions") {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.region_class = "disk";
  inst.regions.push_back(GeomRegion{Region{Disk{{0.0, 0.0}, 1.0}}, 2.5, 2});
  inst.regions.push_back(GeomRegion{Region{Disk{{0.5, 0.0}, 1.0}}, 1.5, 1});
  GeomPoint p0;  // inside both disks
  p0.capacity = 1;
  p0.weight = 3.0;
  GeomPoint p1;  // inside neither
  p1.x = 10.0;
  p1.y = 10.0;
  p1.capacity = 2;
  GeomPoint p2;  // inside the first disk only
  p2.x = -0.9;
  p2.capacity = 3;
  p2.weight = 0.5;
  inst.points = {p0, p1, p2};

  const BuiltHypergraph regions_side = build_hypergraph(inst);
  const Hypergraph& hr = regions_side.hypergraph;
  REQUIRE(hr.num_vertices() == 2);
  CHECK(hr.vertex_weights == std::vector<double>{2.5, 1.5});
  CHECK(hr.vertex_labels == std::vector<std::string>{"r0", "r1"});
  REQUIRE(hr.num_edges() == 2);  // the point covered by nothing is dropped
  CHECK(hr.edges[0].vertices == std::vector<int>{0, 1});
  CHECK(hr.edges[0].capacity == 1);
  CHECK(hr.edges[0].label == "p0");
  CHECK(hr.edges[1].vertices == std::vector<int>{0});
  CHECK(hr.edges[1].capacity == 3);
  CHECK(regions_side.edge_source == std::vector<int>{0, 2});
  CHECK(regions_side.vertex_source == std::vector<int>{0, 1});

  inst.direction = PackDirection::pack_points;
  const BuiltHypergraph points_side = build_hypergraph(inst);
  const Hypergraph& hp = points_side.hypergraph;
  REQUIRE(hp.num_vertices() == 3);
  CHECK(hp.vertex_weights == std::vector<double>{3.0, 1.0, 0.5});
  REQUIRE(hp.num_edges() == 2);
  CHECK(hp.edges[0].vertices == std::vector<int>{0, 2});  // first disk's members
  CHECK(hp.edges[0].capacity == 2);
  CHECK(hp.edges[1].vertices == std::vector<int>{0});
  CHECK(hp.edges[1].capacity == 1);
  CHECK(points_side.edge_source == std::vector<int>{0, 1});
}

TEST_CASE("lifting disks preserves incidence and validates input") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> rad(0.1, 8.0);
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  for (int j = 0; j < 12; ++j) {
    GeomRegion r;
    r.shape = Disk{{coord(rng), coord(rng)}, rad(rng)};
    r.weight = 1.0 + j;
    r.capacity = 1 + (j % 3);
    inst.regions.push_back(r);
  }
  for (int i = 0; i < 30; ++i) {
    GeomPoint p;
    p.x = coord(rng);
    p.y = coord(rng);
    p.capacity = 1 + (i % 2);
    inst.points.push_back(p);
  }

  const GeometricInstance lifted = lift_disk_instance(inst);
  REQUIRE(lifted.points.size() == inst.points.size());
  REQUIRE(lifted.regions.size() == inst.regions.size());
  for (size_t i = 0; i < lifted.points.size(); ++i) {
    CHECK(lifted.points[i].has_z);
    CHECK(lifted.points[i].z == inst.points[i].x * inst.points[i].x +
                                    inst.points[i].y * inst.points[i].y);
  }
  for (size_t i = 0; i < inst.points.size(); ++i) {
    for (size_t j = 0; j < inst.regions.size(); ++j) {
      const bool planar = region_contains(inst.regions[j].shape, inst.points[i]);
      const bool in_lift = region_contains(lifted.regions[j].shape, lifted.points[i]);
      CHECK(planar == in_lift);
    }
  }

  GeometricInstance bad_pt = inst;
  bad_pt.points[0].has_z = true;
  CHECK_THROWS_AS(lift_disk_instance(bad_pt), std::invalid_argument);
  GeometricInstance bad_region = inst;
  bad_region.regions[0].shape = Rect{{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(lift_disk_instance(bad_region), std::invalid_argument);
}

TEST_CASE("plane-point duality is a bitwise involution") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point3 p{coord(rng), coord(rng), coord(rng)};
    const Point3 back = dual_point_of_plane(dual_plane_of_point(p));
    CHECK(back.x == p.x);
    CHECK(back.y == p.y);
    CHECK(back.z == p.z);
    const Halfspace3 h{coord(rng), coord(rng), coord(rng)};
    const Halfspace3 hb = dual_plane_of_point(dual_point_of_plane(h));
    CHECK(hb.a == h.a);
    CHECK(hb.b == h.b);
    CHECK(hb.c == h.c);
  }
}

TEST_CASE("dualizing a disk instance transposes nothing and flips direction") {
  std::mt19937_64 rng(39);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> rad(0.2, 4.0);
  for (int trial = 0; trial < 30; ++trial) {
    GeometricInstance inst;
    inst.direction = (trial % 2 == 0) ? PackDirection::pack_regions : PackDirection::pack_points;
    const int nr = 3 + static_cast<int>(rng() % 6);
    const int np = 4 + static_cast<int>(rng() % 8);
    for (int j = 0; j < nr; ++j) {
      GeomRegion r;
      r.shape = Disk{{coord(rng), coord(rng)}, rad(rng)};
      r.weight = 1.0 + static_cast<double>(rng() % 5);
      r.capacity = 1 + static_cast<int>(rng() % 3);
      inst.regions.push_back(r);
    }
    for (int i = 0; i < np; ++i) {
      GeomPoint p;
      p.x = coord(rng);
      p.y = coord(rng);
      p.weight = 1.0 + static_cast<double>(rng() % 4);
      p.capacity = 1 + static_cast<int>(rng() % 3);
      inst.points.push_back(p);
    }

    const GeometricInstance dual = lift_and_dualize(inst);
    CHECK(dual.direction != inst.direction);
    REQUIRE(dual.regions.size() == inst.points.size());
    REQUIRE(dual.points.size() == inst.regions.size());
    for (size_t i = 0; i < inst.points.size(); ++i) {
      CHECK(dual.regions[i].weight == inst.points[i].weight);
      CHECK(dual.regions[i].capacity == inst.points[i].capacity);
    }
    for (size_t j = 0; j < inst.regions.size(); ++j) {
      CHECK(dual.points[j].weight == inst.regions[j].weight);
      CHECK(dual.points[j].capacity == inst.regions[j].capacity);
      CHECK(dual.points[j].has_z);
    }

    // Membership of point i in disk j must survive the lift-and-dualize trip
    // as membership of dual point j in dual plane i.
    for (size_t i = 0; i < inst.points.size(); ++i) {
      for (size_t j = 0; j < inst.regions.size(); ++j) {
        const bool planar = region_contains(inst.regions[j].shape, inst.points[i]);
        const bool dualized = region_contains(dual.regions[i].shape, dual.points[j]);
        CHECK(planar == dualized);
      }
    }

    // The packing problems are therefore identical hypergraphs.
    const BuiltHypergraph a = build_hypergraph(inst);
    const BuiltHypergraph b = build_hypergraph(dual);
    REQUIRE(a.hypergraph.num_vertices() == b.hypergraph.num_vertices());
    REQUIRE(a.hypergraph.num_edges() == b.hypergraph.num_edges());
    CHECK(a.hypergraph.vertex_weights == b.hypergraph.vertex_weights);
    for (int e = 0; e < a.hypergraph.num_edges(); ++e) {
      CHECK(a.hypergraph.edges[e].vertices == b.hypergraph.edges[e].vertices);
      CHECK(a.hypergraph.edges[e].capacity == b.hypergraph.edges[e].capacity);
    }
  }
}

TEST_CASE("depth histogram counts distinct faces once") {
  const std::vector<Region> two_disks = {Region{Disk{{0.0, 0.0}, 1.0}},
                                         Region{Disk{{1.0, 0.0}, 1.0}}};
  std::vector<GeomPoint> samples;
  auto add = [&samples](double x, double y) {
    GeomPoint p;
    p.x = x;
    p.y = y;
    samples.push_back(p);
  };
  add(-0.5, 0.0);  // left disk only
  add(-0.6, 0.1);  // same face, must not double count
  add(1.5, 0.0);   // right disk only
  add(0.5, 0.0);   // lens
  add(0.5, 0.1);   // lens again
  add(0.0, 5.0);   // outside face
  add(3.0, 3.0);   // outside face again
  const std::map<int, int> hist = count_faces_by_depth(two_disks, samples);
  REQUIRE(hist.size() == 3);
  CHECK(hist.at(0) == 1);
  CHECK(hist.at(1) == 2);
  CHECK(hist.at(2) == 1);
}
