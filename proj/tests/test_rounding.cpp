#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "geopack/oracle.hpp"
#include "geopack/rounding.hpp"

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

// Independent expectation of the number of capacity-witnessing groups v
// completes, by enumerating every keep/drop outcome of the other vertices
// with product probabilities. Quadratic-blowup ground truth for `resistance`.
double expected_completed_groups(const Hypergraph& h, int v, const std::vector<double>& x,
                                 double rho) {
  const int n = h.num_vertices();
  std::vector<int> others;
  for (int u = 0; u < n; ++u)
    if (u != v) others.push_back(u);
  const int m = static_cast<int>(others.size());
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    double prob = 1.0;
    std::vector<char> kept(static_cast<size_t>(n), 0);
    for (int i = 0; i < m; ++i) {
      const double p = x[static_cast<size_t>(others[static_cast<size_t>(i)])] / rho;
      if ((mask >> i) & 1u) {
        prob *= p;
        kept[static_cast<size_t>(others[static_cast<size_t>(i)])] = 1;
      } else {
        prob *= 1.0 - p;
      }
    }
    if (prob == 0.0) continue;
    double groups = 0.0;
    for (const Hyperedge& e : h.edges) {
      if (!std::binary_search(e.vertices.begin(), e.vertices.end(), v)) continue;
      int cnt = 0;
      for (int u : e.vertices)
        if (u != v && kept[static_cast<size_t>(u)]) ++cnt;
      if (cnt >= e.capacity) {
        // number of cap-sized groups of kept partners: C(cnt, cap)
        double c = 1.0;
        for (int i = 0; i < e.capacity; ++i) c = c * (cnt - i) / (i + 1);
        groups += c;
      }
    }
    total += prob * groups;
  }
  return total;
}

}  // namespace

TEST_CASE("interference score equals the exhaustive expectation") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> xdist(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 5);  // up to 8 vertices
    Hypergraph h = random_hypergraph(rng, n, 6, 2);
    std::vector<double> x(static_cast<size_t>(n));
    for (double& xi : x) xi = xdist(rng);
    const double rho = 1.0 + 3.0 * xdist(rng);
    const std::vector<char> active(static_cast<size_t>(n), 1);
    for (int v = 0; v < n; ++v) {
      const double fast = resistance(h, v, active, x, rho);
      double slow = expected_completed_groups(h, v, x, rho);
      if (x[static_cast<size_t>(v)] <= 0.0) slow = 0.0;  // zero-mass vertices score zero
      const double scale = std::max(1.0, std::abs(slow));
      REQUIRE(std::abs(fast - slow) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("pairwise triangle at half mass has unit interference") {
  const Hypergraph h = triangle_of_pairs();
  const std::vector<double> x = {0.5, 0.5, 0.5};
  const std::vector<char> active = {1, 1, 1};
  for (int v = 0; v < 3; ++v)
    CHECK(resistance(h, v, active, x, 1.0) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("half-rate violation estimate converges to 7/16 on the triangle") {
  const Hypergraph h = triangle_of_pairs();
  const std::vector<double> x = {0.5, 0.5, 0.5};
  const std::vector<char> active = {1, 1, 1};
  // each neighbor survives at rate 1/4, so some incident edge fills with
  // probability 1 - (3/4)^2 = 7/16
  Rng rng(9, RngStream::ordering_samples);
  const double est = estimate_violation_probability(h, 0, active, x, 1.0, rng, 40000);
  const double expect = 7.0 / 16.0;
  const double sigma = std::sqrt(expect * (1 - expect) / 40000.0);
  CHECK(std::abs(est - expect) <= 4.0 * sigma);
}

TEST_CASE("ordering is a permutation and resolves ties toward lower indices") {
  Hypergraph h;
  h.vertex_weights = {1, 1, 1, 1};
  h.edges = {{{0, 1, 2, 3}, 1, ""}};
  const std::vector<double> x = {0.4, 0.4, 0.4, 0.4};
  const Ordering ord = build_ordering(h, x, 1.0);
  std::set<int> verts(ord.order.begin(), ord.order.end());
  REQUIRE(verts.size() == 4);
  // all scores tie, so selection back-to-front picks 0, then 1, 2, 3,
  // leaving the highest index at the front of the processing order
  CHECK(ord.order == std::vector<int>{3, 2, 1, 0});
  REQUIRE(ord.diagnostics.size() == 4);
  CHECK(ord.diagnostics[0].vertex == 0);
  CHECK(ord.diagnostics[0].active_size == 4);
}

TEST_CASE("isolated cheap vertices are processed last") {
  Hypergraph h;
  h.vertex_weights = {1, 1, 1};
  h.edges = {{{0, 1}, 1, ""}};
  const std::vector<double> x = {0.9, 0.9, 0.9};
  const Ordering ord = build_ordering(h, x, 1.0);
  // vertex 2 has no incident edge, zero score, so it is selected first and
  // placed at the very end
  CHECK(ord.order.back() == 2);
}

TEST_CASE("estimated ordering matches the exact one on easy instances") {
  Hypergraph h;
  h.vertex_weights = {1, 1, 1};
  h.edges = {{{0, 1}, 1, ""}};
  const std::vector<double> x = {0.9, 0.9, 0.0};
  SolverConfig cfg;
  cfg.criterion = OrderingCriterion::estimated_violation;
  cfg.violation_samples = 512;
  const Ordering est = build_ordering(h, x, 2.0, cfg);
  std::set<int> verts(est.order.begin(), est.order.end());
  CHECK(verts.size() == 3);
}

TEST_CASE("sampling with alteration never exceeds any capacity") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 9);
    const Hypergraph h = random_hypergraph(rng, n, 8, 3);
    const FractionalSolution lp = build_and_solve_lp(h);
    SolverConfig cfg;
    cfg.seed = 9000 + static_cast<std::uint64_t>(trial);
    const ScaleChoice scale = choose_scale(h, lp.values, lp.energy, cfg);
    const Ordering ord = build_ordering(h, lp.values, scale.rho, cfg);
    Rng trial_rng(cfg.seed, RngStream::trials, static_cast<std::uint64_t>(trial));
    const PackingSolution sol = round_with_alteration(h, lp.values, scale.rho, ord, trial_rng);
    const PackingSolution audit = check_packing(h, sol.chosen, 1);
    REQUIRE(audit.feasible);
    CHECK(audit.weight == Catch::Approx(sol.weight).margin(1e-12));
  }
}

TEST_CASE("overload probability clears the summed potential lower bound") {
  // Keeping each vertex of an edge independently at its fractional rate, the
  // chance the edge exceeds capacity k must be at least the sum of its
  // conflicts' potentials divided by 2 (2e)^k. Probabilities are exhaustive
  // over all keep/drop outcomes, so this is exact arithmetic, not sampling.
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 5);
    const Hypergraph h = random_hypergraph(rng, n, 6, 3);
    const FractionalSolution lp = build_and_solve_lp(h);
    for (double rho : {1.0, 2.0}) {
      std::vector<int> all(static_cast<size_t>(n));
      for (int v = 0; v < n; ++v) all[static_cast<size_t>(v)] = v;
      const ConflictEnumeration conflicts = enumerate_conflicts(h, all);
      REQUIRE_FALSE(conflicts.truncated);
      for (int ei = 0; ei < h.num_edges(); ++ei) {
        const Hyperedge& e = h.edges[ei];
        const int m = static_cast<int>(e.vertices.size());
        if (m > 16) continue;
        double overload = 0.0;
        for (unsigned mask = 0; mask < (1u << m); ++mask) {
          int cnt = 0;
          double prob = 1.0;
          for (int i = 0; i < m; ++i) {
            const double p = lp.values[static_cast<size_t>(e.vertices[static_cast<size_t>(i)])] / rho;
            if ((mask >> i) & 1u) {
              prob *= p;
              ++cnt;
            } else {
              prob *= 1.0 - p;
            }
          }
          if (cnt > e.capacity) overload += prob;
        }
        double potential_sum = 0.0;
        for (const Conflict& c : conflicts.conflicts)
          if (c.witness_edge == ei)
            potential_sum += scaled_conflict_potential(lp.values, c.vertices, rho);
        const double bound =
            potential_sum / (2.0 * std::pow(2.0 * std::exp(1.0), e.capacity));
        CHECK(overload >= bound - 1e-12);
      }
    }
  }
}

TEST_CASE("scale selection honors overrides and conflict-free shortcuts") {
  Hypergraph free_h;
  free_h.vertex_weights = {1, 1};
  free_h.edges = {{{0, 1}, 2, ""}};
  const std::vector<double> x = {1.0, 1.0};
  const ScaleChoice free_choice = choose_scale(free_h, x, 2.0);
  CHECK(free_choice.rho == 1.0);
  CHECK(free_choice.conflict_free);

  SolverConfig cfg;
  cfg.scale_override = 3.5;
  const ScaleChoice forced = choose_scale(triangle_of_pairs(), {0.5, 0.5, 0.5}, 1.5, cfg);
  CHECK(forced.rho == 3.5);

  SolverConfig bad;
  bad.scale_override = 0.5;
  CHECK_THROWS_AS(choose_scale(triangle_of_pairs(), {0.5, 0.5, 0.5}, 1.5, bad),
                  std::invalid_argument);
}

TEST_CASE("class growth factors follow the published table") {
  CHECK(gamma_for_class("", 100.0) == 1.0);
  CHECK(gamma_for_class("disk", 100.0) == 1.0);
  CHECK(gamma_for_class("pseudo_disk", 8.0) == 1.0);
  CHECK(gamma_for_class("similar_fat", 8.0) == 1.0);
  CHECK(gamma_for_class("rect", 8.0) == 1.0);
  CHECK(gamma_for_class("box", 8.0) == 1.0);
  CHECK(gamma_for_class("fat_triangle", 1.0) == 1.0);   // log2(max(E,2)) = 1
  CHECK(gamma_for_class("fat_triangle", 9.0) == 4.0);   // ceil(log2 9) = 4
  CHECK(gamma_for_class("fat_triangle", 1e9) == 5.0);   // clamped at 5
  CHECK(gamma_for_class("generic", 0.5) == 1.0);
  CHECK(gamma_for_class("generic", 7.5) == 7.5);
  CHECK_THROWS_AS(gamma_for_class("polygon", 2.0), std::invalid_argument);
}

TEST_CASE("sparsified masses are integer multiples with controlled loss") {
  std::mt19937_64 rng(88);
  int successes = 0;
  const int cases = 25;
  for (int trial = 0; trial < cases; ++trial) {
    const Hypergraph h = random_hypergraph(rng, 12, 8, 3);
    const FractionalSolution lp = build_and_solve_lp(h);
    SolverConfig cfg;
    cfg.seed = 300 + static_cast<std::uint64_t>(trial);
    const SparsifyResult sp = sparsify(h, lp, cfg);
    REQUIRE(sp.denominator == 2 * sp.t_scale);
    REQUIRE(sp.t_scale >= 16);
    for (size_t v = 0; v < sp.y.size(); ++v)
      CHECK(sp.y[v] == Catch::Approx(static_cast<double>(sp.counts[v]) / sp.denominator)
                           .margin(1e-15));
    if (!sp.success) continue;
    ++successes;
    CHECK(sp.objective >= lp.objective / 12.0 - 1e-9);
    CHECK(sp.energy >= lp.energy / 4.0 - 1e-9);
    CHECK(sp.energy <= 4.0 * lp.energy + 1e-9);
    // integral feasibility at denominator scale
    for (const Hyperedge& e : h.edges) {
      long long load = 0;
      for (int v : e.vertices) load += sp.counts[static_cast<size_t>(v)];
      CHECK(load <= static_cast<long long>(e.capacity) * sp.denominator);
    }
  }
  CHECK(successes >= (cases * 8) / 10);
}

TEST_CASE("capacity peeling unions disjoint unit-capacity rounds") {
  const Hypergraph h = triangle_of_pairs();
  auto subsolver = [](const Hypergraph& sub) {
    const OracleResult r = exact_pack(sub);
    return check_packing(sub, r.optimal_set, 1);
  };
  const PackingSolution two = uniform_capacity_peel(h, 2, subsolver);
  CHECK(two.bicriteria_bound == 2);
  CHECK(two.feasible);
  CHECK(two.chosen.size() == 2);
  const PackingSolution three = uniform_capacity_peel(h, 3, subsolver);
  CHECK(three.chosen.size() == 3);
  CHECK_THROWS_AS(uniform_capacity_peel(h, 0, subsolver), std::invalid_argument);
}

TEST_CASE("full pipeline is deterministic and thread-count independent") {
  std::mt19937_64 rng(909);
  const Hypergraph h = random_hypergraph(rng, 14, 10, 2);
  SolverConfig cfg;
  cfg.seed = 42;
  cfg.trials = 8;
  const PackReport a = pack_hypergraph(h, cfg);
  const PackReport b = pack_hypergraph(h, cfg);
  CHECK(a.best.chosen == b.best.chosen);
  CHECK(a.trial_weights == b.trial_weights);
  cfg.threads = 4;
  const PackReport c = pack_hypergraph(h, cfg);
  CHECK(a.best.chosen == c.best.chosen);
  CHECK(a.trial_weights == c.trial_weights);
  CHECK(a.best.feasible);
}

TEST_CASE("pipeline ties go to the earliest trial") {
  Hypergraph h;
  h.vertex_weights = {1.0};
  SolverConfig cfg;
  cfg.trials = 5;
  const PackReport rep = pack_hypergraph(h, cfg);
  CHECK(rep.trials_run == 5);
  CHECK(rep.best.weight == 1.0);  // conflict-free: every trial keeps the vertex
}
