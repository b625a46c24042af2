#include <catch_amalgamated.hpp>

#include <random>

#include "geopack/lp.hpp"
#include "geopack/oracle.hpp"

using namespace geopack;

namespace {

Hypergraph triangle_of_pairs() {
  Hypergraph h;
  h.vertex_weights = {1.0, 1.0, 1.0};
  h.edges = {{{0, 1}, 1, ""}, {{0, 2}, 1, ""}, {{1, 2}, 1, ""}};
  return h;
}

Hypergraph random_hypergraph(std::mt19937_64& rng, int n, int m, int max_cap) {
  std::uniform_real_distribution<double> wdist(0.5, 3.0);
  Hypergraph h;
  for (int v = 0; v < n; ++v) h.vertex_weights.push_back(wdist(rng));
  for (int e = 0; e < m; ++e) {
    std::vector<int> verts;
    for (int v = 0; v < n; ++v)
      if (rng() % 3 == 0) verts.push_back(v);
    if (verts.size() < 2) continue;
    h.edges.push_back({verts, 1 + static_cast<int>(rng() % max_cap), ""});
  }
  return h;
}

}  // namespace

TEST_CASE("three pairwise unit-capacity edges cap the objective at 3/2") {
  const FractionalSolution sol = build_and_solve_lp(triangle_of_pairs());
  CHECK(sol.objective == Catch::Approx(1.5).margin(1e-9));
  for (double v : sol.values) CHECK(v == Catch::Approx(0.5).margin(1e-9));
  CHECK(sol.energy == Catch::Approx(1.5).margin(1e-9));
  CHECK(sol.feasibility_slack <= 1e-8);
}

TEST_CASE("edges that cannot overflow never constrain the optimum") {
  Hypergraph h;
  h.vertex_weights = {2.0, 3.0, 4.0};
  h.edges = {{{0, 1, 2}, 3, ""}, {{0, 1}, 2, ""}};
  const FractionalSolution sol = build_and_solve_lp(h);
  CHECK(sol.objective == Catch::Approx(9.0).margin(1e-9));
  for (double v : sol.values) CHECK(v == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("primal values stay within the unit box and respect capacities") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const Hypergraph h = random_hypergraph(rng, 10, 8, 3);
    const FractionalSolution sol = build_and_solve_lp(h);
    for (double v : sol.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    for (const Hyperedge& e : h.edges) {
      double load = 0.0;
      for (int v : e.vertices) load += sol.values[static_cast<size_t>(v)];
      CHECK(load <= e.capacity + 1e-6);
    }
  }
}

TEST_CASE("the dual certificate bounds the primal objective from above") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Hypergraph h = random_hypergraph(rng, 12, 10, 2);
    const LpSolveReport rep = build_and_solve_lp_with_info(h);
    CHECK(rep.certificate.dual_objective >= rep.solution.objective - 1e-6);
    for (double y : rep.certificate.edge_duals) CHECK(y >= -1e-12);
  }
}

TEST_CASE("the relaxation dominates the exact integral optimum") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const Hypergraph h = random_hypergraph(rng, 11, 9, 2);
    const FractionalSolution sol = build_and_solve_lp(h);
    const OracleResult opt = exact_pack(h);
    REQUIRE(opt.proven_optimal);
    CHECK(sol.objective >= opt.optimal_weight - 1e-6);
  }
}

TEST_CASE("low fractional energy with positive weight raises the warning") {
  Hypergraph h;
  h.vertex_weights = {1.0, 1.0};
  h.edges = {{{0, 1}, 1, ""}};
  // force both values toward 1/2; with two vertices energy is 1.0, no warning
  const LpSolveReport ok = build_and_solve_lp_with_info(h);
  CHECK_FALSE(ok.certificate.energy_warning);

  // a single vertex pinned to a fraction below one trips the warning
  Hypergraph tiny;
  tiny.vertex_weights = {1.0, 1.0, 1.0};
  tiny.edges = {{{0, 1, 2}, 1, ""}, {{0, 1}, 1, ""}, {{0, 2}, 1, ""}, {{1, 2}, 1, ""}};
  const LpSolveReport warn = build_and_solve_lp_with_info(tiny);
  CHECK(warn.solution.energy < 2.0);
  // warning fires exactly when total mass dips below one
  CHECK(warn.certificate.energy_warning == (warn.solution.energy < 1.0));
}

TEST_CASE("no-edge instances saturate every value at one") {
  Hypergraph h;
  h.vertex_weights = {1.0, 2.0};
  const LpSolveReport rep = build_and_solve_lp_with_info(h);
  CHECK(rep.solution.objective == Catch::Approx(3.0));
  CHECK(rep.solution.energy == Catch::Approx(2.0));
  CHECK_FALSE(rep.certificate.energy_warning);
}

TEST_CASE("text dump lists objective, binding rows, and bounds") {
  const std::string text = dump_lp_format(triangle_of_pairs());
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("Subject To") != std::string::npos);
  CHECK(text.find("Bounds") != std::string::npos);
  CHECK(text.find("x0") != std::string::npos);
  CHECK(text.find("<= 1") != std::string::npos);
}

TEST_CASE("solver is deterministic") {
  std::mt19937_64 rng(77);
  const Hypergraph h = random_hypergraph(rng, 14, 12, 3);
  const FractionalSolution a = build_and_solve_lp(h);
  const FractionalSolution b = build_and_solve_lp(h);
  CHECK(a.values == b.values);
  CHECK(a.objective == b.objective);
}
