#include <catch_amalgamated.hpp>
#include <random>
#include <set>
#include <vector>

#include "geopack/localsearch.hpp"
#include "geopack/oracle.hpp"

using namespace geopack;

namespace {

GeomPoint pt(double x, double y) {
  GeomPoint p;
  p.x = x;
  p.y = y;
  return p;
}

GeomRegion disk(double x, double y, double r) {
  GeomRegion g;
  g.shape = Disk{{x, y}, r};
  return g;
}

}  // namespace

TEST_CASE("disjoint disks are all selected and locally optimal") {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.regions = {disk(0, 0, 1), disk(10, 0, 1), disk(20, 0, 1)};
  inst.points = {pt(0, 0), pt(10, 0), pt(20, 0)};
  const PackingSolution s = local_search_disks(inst, 3);
  CHECK(s.chosen == std::vector<int>{0, 1, 2});
  CHECK(s.weight == 3.0);
  CHECK(s.feasible);
  CHECK(verify_b_local_optimality(inst, s.chosen, 3).locally_optimal);
}

TEST_CASE("pairwise conflicts leave exactly one disk standing") {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.regions = {disk(0, 0, 1.2), disk(2, 0, 1.2), disk(1, 1.7, 1.2)};
  inst.points = {pt(1, 0), pt(0.5, 0.85), pt(1.5, 0.85)};
  const BuiltHypergraph bh = build_hypergraph(inst);
  for (const Hyperedge& e : bh.hypergraph.edges) REQUIRE(e.vertices.size() == 2);
  const PackingSolution s = local_search_disks(inst, 3);
  CHECK(s.chosen.size() == 1);
  CHECK(verify_b_local_optimality(inst, s.chosen, 3).locally_optimal);
}

TEST_CASE("verifier reports an inserting witness against the empty set") {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.regions = {disk(0, 0, 1)};
  inst.points = {pt(0, 0)};
  const LocalOptimality lo = verify_b_local_optimality(inst, {}, 3);
  CHECK_FALSE(lo.locally_optimal);
  CHECK(lo.witness.insert_set.size() == 1);
  CHECK(lo.witness.remove_set.empty());
}

TEST_CASE("verifier finds the two-for-one hub swap") {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.regions = {disk(0, 0, 2.0), disk(-1.5, 0, 0.4), disk(1.5, 0, 0.4)};
  inst.points = {pt(-1.5, 0), pt(1.5, 0)};
  const LocalOptimality lo = verify_b_local_optimality(inst, {0}, 3);
  REQUIRE_FALSE(lo.locally_optimal);
  CHECK(lo.witness.insert_set == std::vector<int>{1, 2});
  CHECK(lo.witness.remove_set == std::vector<int>{0});
  // running the search from scratch lands on both leaves
  const PackingSolution s = local_search_disks(inst, 1);
  CHECK(s.chosen == std::vector<int>{1, 2});
}

TEST_CASE("input contracts are enforced") {
  GeometricInstance inst;
  inst.direction = PackDirection::pack_regions;
  inst.regions = {disk(0, 0, 1)};
  inst.points = {pt(0, 0)};
  CHECK_THROWS_AS(local_search_disks(inst, 0), std::invalid_argument);
  CHECK_THROWS_AS(local_search_disks(inst, 5), std::invalid_argument);
  CHECK_THROWS_AS(verify_b_local_optimality(inst, {}, 0), std::invalid_argument);

  GeometricInstance weighted = inst;
  weighted.regions[0].weight = 2.0;  // the unit-weight discipline is required
  CHECK_THROWS_AS(local_search_disks(weighted, 3), std::invalid_argument);

  GeometricInstance capped = inst;
  capped.points[0].capacity = 2;
  CHECK_THROWS_AS(local_search_disks(capped, 3), std::invalid_argument);

  GeometricInstance wrong_dir = inst;
  wrong_dir.direction = PackDirection::pack_points;
  CHECK_THROWS_AS(local_search_disks(wrong_dir, 3), std::invalid_argument);

  GeometricInstance rects = inst;
  rects.regions[0].shape = Rect{{0.0, 0.0}, {1.0, 1.0}};
  CHECK_THROWS_AS(local_search_disks(rects, 3), std::invalid_argument);

  // the verifier caps instance size and insists on an independent input set
  GeometricInstance big;
  big.direction = PackDirection::pack_regions;
  for (int j = 0; j < 41; ++j) big.regions.push_back(disk(3.0 * j, 0, 1));
  CHECK_THROWS_AS(verify_b_local_optimality(big, {}, 3), std::invalid_argument);

  GeometricInstance clash;
  clash.direction = PackDirection::pack_regions;
  clash.regions = {disk(0, 0, 1), disk(0.5, 0, 1)};
  clash.points = {pt(0.25, 0)};
  CHECK_THROWS_AS(verify_b_local_optimality(clash, {0, 1}, 3), std::invalid_argument);
}

TEST_CASE("random instances reach three quarters of the optimum") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 2.0;
  for (int trial = 0; trial < 50; ++trial) {
    GeometricInstance inst;
    inst.direction = PackDirection::pack_regions;
    for (int j = 0; j < 12; ++j)
      inst.regions.push_back(disk(unif(rng) * 6, unif(rng) * 6, 1.0));
    for (int i = 0; i < 20; ++i) inst.points.push_back(pt(unif(rng) * 6, unif(rng) * 6));
    const PackingSolution s = local_search_disks(inst, 3);
    CHECK(verify_b_local_optimality(inst, s.chosen, 3).locally_optimal);
    const BuiltHypergraph bh = build_hypergraph(inst);
    CHECK(check_packing(bh.hypergraph, s.chosen, 1).feasible);
    const OracleResult opt = exact_pack(bh.hypergraph, 1 << 26);
    REQUIRE(opt.proven_optimal);
    if (opt.optimal_weight > 0) {
      const double ratio = s.weight / opt.optimal_weight;
      worst = std::min(worst, ratio);
      CHECK(ratio >= 0.75 - 1e-12);
    }

    // conflicts between the local solution and an optimum form a planar-style
    // sparse bipartite graph: at most 3v - 6 edges
    const std::vector<int>& L = s.chosen;
    const std::vector<int>& O = opt.optimal_set;
    std::set<int> vs(L.begin(), L.end());
    vs.insert(O.begin(), O.end());
    const auto ptset = detail::disk_point_sets(inst);
    std::set<std::pair<int, int>> conflict;
    for (int l : L)
      for (int o : O) {
        if (l == o) continue;
        for (int p : ptset[static_cast<size_t>(l)])
          for (int q : ptset[static_cast<size_t>(o)])
            if (p == q) conflict.insert({std::min(l, o), std::max(l, o)});
      }
    if (vs.size() >= 3) CHECK(conflict.size() <= 3 * vs.size() - 6);
  }
  INFO("worst ratio " << worst);
  CHECK(worst <= 1.0 + 1e-12);
}
