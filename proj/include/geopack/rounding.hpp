#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geopack/core.hpp"
#include "geopack/lp.hpp"
#include "geopack/rng.hpp"

// Randomized rounding of the fractional packing: sample vertices at rate
// x_v / rho, then walk a precomputed low-interference order and drop any
// vertex that would overload an edge. The scale rho is chosen from the
// region-class growth function and auto-calibrated so the least exposed
// vertex has small violation probability.

namespace geopack {

enum class OrderingCriterion { exact_resistance, estimated_violation };

struct SolverConfig {
  double alpha = 4.0;                  // base multiplier for the sampling scale
  std::optional<double> scale_override;
  std::optional<double> gamma_override;
  std::string region_class;            // "", disk, pseudo_disk, similar_fat, rect, box, fat_triangle, generic
  OrderingCriterion criterion = OrderingCriterion::exact_resistance;
  int violation_samples = 128;         // per-vertex samples for the estimator
  int trials = 16;
  int max_sparsify_attempts = 64;
  double lp_tol = 1e-8;
  std::uint64_t seed = 1;
  int threads = 1;
};

// Class-dependent growth factor applied to the fractional energy.
inline double gamma_for_class(const std::string& cls, double lp_energy) {
  if (cls.empty() || cls == "disk" || cls == "pseudo_disk" || cls == "similar_fat" ||
      cls == "rect" || cls == "box")
    return 1.0;
  if (cls == "fat_triangle")
    return std::min(5.0, std::max(1.0, std::ceil(std::log2(std::max(lp_energy, 2.0)))));
  if (cls == "generic") return std::max(1.0, lp_energy);
  throw std::invalid_argument("unknown region class: " + cls);
}

// Product of x_v / rho over the vertices of a conflict.
inline double scaled_conflict_potential(const std::vector<double>& x,
                                        const std::vector<int>& conflict_vertices, double rho) {
  double p = 1.0;
  for (int v : conflict_vertices) p *= x.at(static_cast<size_t>(v)) / rho;
  return p;
}

namespace detail {

// Elementary symmetric polynomial e_k of the given values, by the standard DP.
inline double elementary_symmetric(const std::vector<double>& z, int k) {
  if (k < 0) return 0.0;
  if (k == 0) return 1.0;
  if (static_cast<int>(z.size()) < k) return 0.0;
  std::vector<double> dp(static_cast<size_t>(k) + 1, 0.0);
  dp[0] = 1.0;
  int used = 0;
  for (double zi : z) {
    ++used;
    const int top = std::min(k, used);
    for (int j = top; j >= 1; --j) dp[j] += dp[j - 1] * zi;
  }
  return dp[static_cast<size_t>(k)];
}

}  // namespace detail

// Expected number of overload-witnessing vertex groups that v completes when
// every other active vertex is kept independently at rate x_u / rho. Exactly
// sum over edges h containing v of e_{cap(h)} of the scaled values of the
// other active members of h.
inline double resistance(const Hypergraph& h, int v, const std::vector<char>& active,
                         const std::vector<double>& x, double rho) {
  if (v < 0 || v >= h.num_vertices()) throw std::out_of_range("resistance: vertex out of range");
  if (!(rho >= 1.0)) throw std::invalid_argument("resistance: rho must be >= 1");
  if (x[static_cast<size_t>(v)] <= 0.0) return 0.0;
  double total = 0.0;
  std::vector<double> z;
  for (const Hyperedge& e : h.edges) {
    if (!std::binary_search(e.vertices.begin(), e.vertices.end(), v)) continue;
    z.clear();
    for (int u : e.vertices) {
      if (u == v) continue;
      if (active[static_cast<size_t>(u)] && x[static_cast<size_t>(u)] > 0.0)
        z.push_back(x[static_cast<size_t>(u)] / rho);
    }
    total += detail::elementary_symmetric(z, e.capacity);
  }
  return total;
}

// Monte-Carlo probability that v, forced into the sample, sees some incident
// edge filled to capacity by the other active vertices, each kept
// independently at the half rate x_u / (2 rho).
inline double estimate_violation_probability(const Hypergraph& h, int v,
                                             const std::vector<char>& active,
                                             const std::vector<double>& x, double rho, Rng& rng,
                                             int samples = 128) {
  if (v < 0 || v >= h.num_vertices()) throw std::out_of_range("estimator: vertex out of range");
  if (samples <= 0) throw std::invalid_argument("estimator: samples must be positive");
  std::vector<const Hyperedge*> incident;
  for (const Hyperedge& e : h.edges)
    if (std::binary_search(e.vertices.begin(), e.vertices.end(), v)) incident.push_back(&e);
  if (incident.empty()) return 0.0;
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    bool violated = false;
    for (const Hyperedge* e : incident) {
      int others = 0;
      for (int u : e->vertices) {
        if (u == v || !active[static_cast<size_t>(u)]) continue;
        if (rng.bernoulli(x[static_cast<size_t>(u)] / (2.0 * rho))) ++others;
      }
      if (others >= e->capacity) {
        violated = true;
        break;
      }
    }
    if (violated) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

struct OrderingDiagnostic {
  int vertex = -1;
  double score = 0.0;     // resistance or estimated violation at selection time
  int active_size = 0;    // |A| when the vertex was selected
};

struct Ordering {
  std::vector<int> order;                      // processing order for alteration
  std::vector<OrderingDiagnostic> diagnostics; // in selection order (back to front)
};

// Builds the processing order by repeatedly selecting, among the still-active
// vertices, the one with the least interference score, and placing it at the
// latest unfilled position. Ties go to the lowest vertex index.
inline Ordering build_ordering(const Hypergraph& h, const std::vector<double>& x, double rho,
                               const SolverConfig& config = {}) {
  const int n = h.num_vertices();
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("build_ordering: size mismatch");
  Ordering result;
  result.order.assign(static_cast<size_t>(n), -1);
  std::vector<char> active(static_cast<size_t>(n), 1);

  std::vector<std::vector<int>> incident(static_cast<size_t>(n));
  for (int ei = 0; ei < h.num_edges(); ++ei)
    for (int v : h.edges[ei].vertices) incident[static_cast<size_t>(v)].push_back(ei);
  std::vector<std::vector<int>> neighbors(static_cast<size_t>(n));
  if (config.criterion == OrderingCriterion::exact_resistance) {
    for (const Hyperedge& e : h.edges)
      for (int u : e.vertices)
        for (int w : e.vertices)
          if (u != w) neighbors[static_cast<size_t>(u)].push_back(w);
    for (auto& nb : neighbors) {
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
  }

  std::vector<double> score(static_cast<size_t>(n), 0.0);
  std::vector<char> dirty(static_cast<size_t>(n), 1);
  for (int pos = n; pos >= 1; --pos) {
    int best = -1;
    for (int v = 0; v < n; ++v) {
      if (!active[static_cast<size_t>(v)]) continue;
      if (dirty[static_cast<size_t>(v)]) {
        if (config.criterion == OrderingCriterion::exact_resistance) {
          score[static_cast<size_t>(v)] = resistance(h, v, active, x, rho);
        } else {
          Rng vr(config.seed, RngStream::ordering_samples,
                 (static_cast<std::uint64_t>(pos) << 32) ^ static_cast<std::uint64_t>(v));
          score[static_cast<size_t>(v)] =
              estimate_violation_probability(h, v, active, x, rho, vr, config.violation_samples);
        }
        dirty[static_cast<size_t>(v)] = 0;
      }
      if (best < 0 || score[static_cast<size_t>(v)] < score[static_cast<size_t>(best)]) best = v;
    }
    result.order[static_cast<size_t>(pos - 1)] = best;
    result.diagnostics.push_back({best, score[static_cast<size_t>(best)],
                                  static_cast<int>(std::count(active.begin(), active.end(), 1))});
    active[static_cast<size_t>(best)] = 0;
    if (config.criterion == OrderingCriterion::exact_resistance) {
      for (int u : neighbors[static_cast<size_t>(best)]) dirty[static_cast<size_t>(u)] = 1;
    } else {
      for (int v = 0; v < n; ++v) dirty[static_cast<size_t>(v)] = 1;
    }
  }
  return result;
}

// One sampling + alteration pass. Vertices enter the sample independently at
// rate x_v / rho; the alteration walk visits the precomputed order front to
// back and keeps a sampled vertex only if every incident edge still has room.
inline PackingSolution round_with_alteration(const Hypergraph& h, const std::vector<double>& x,
                                             double rho, const Ordering& ordering, Rng& rng) {
  const int n = h.num_vertices();
  if (static_cast<int>(ordering.order.size()) != n)
    throw std::invalid_argument("round_with_alteration: ordering size mismatch");
  std::vector<char> sampled(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    sampled[static_cast<size_t>(v)] = rng.bernoulli(x[static_cast<size_t>(v)] / rho) ? 1 : 0;

  std::vector<std::vector<int>> incident(static_cast<size_t>(n));
  for (int ei = 0; ei < h.num_edges(); ++ei)
    for (int v : h.edges[ei].vertices) incident[static_cast<size_t>(v)].push_back(ei);

  std::vector<int> load(static_cast<size_t>(std::max(1, h.num_edges())), 0);
  std::vector<int> kept;
  for (int v : ordering.order) {
    if (!sampled[static_cast<size_t>(v)]) continue;
    bool fits = true;
    for (int ei : incident[static_cast<size_t>(v)]) {
      if (load[static_cast<size_t>(ei)] >= h.edges[ei].capacity) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    kept.push_back(v);
    for (int ei : incident[static_cast<size_t>(v)]) ++load[static_cast<size_t>(ei)];
  }
  std::sort(kept.begin(), kept.end());
  PackingSolution sol;
  sol.chosen = std::move(kept);
  sol.weight = subset_weight(h, sol.chosen);
  sol.edge_loads.assign(load.begin(), load.begin() + h.num_edges());
  sol.bicriteria_bound = 1;
  sol.feasible = true;
  return sol;
}

struct ScaleChoice {
  double rho = 1.0;
  double gamma_value = 1.0;
  int doublings = 0;
  bool calibration_warning = false;
  bool conflict_free = false;
};

// Sampling scale: 1 when no edge can ever overflow, otherwise
// alpha * gamma(E)^(1/nu), doubled until the least exposed vertex has
// estimated violation probability at most 1/4.
inline ScaleChoice choose_scale(const Hypergraph& h, const std::vector<double>& x,
                                double lp_energy, const SolverConfig& config = {}) {
  ScaleChoice choice;
  if (config.scale_override) {
    if (!(*config.scale_override >= 1.0))
      throw std::invalid_argument("choose_scale: override must be >= 1");
    choice.rho = *config.scale_override;
    return choice;
  }
  bool conflict_free = true;
  for (const Hyperedge& e : h.edges)
    if (static_cast<int>(e.vertices.size()) > e.capacity) conflict_free = false;
  if (conflict_free) {
    choice.rho = 1.0;
    choice.conflict_free = true;
    return choice;
  }
  const double gamma_value = config.gamma_override
                                 ? *config.gamma_override
                                 : gamma_for_class(config.region_class, lp_energy);
  if (!(gamma_value >= 1.0)) throw std::invalid_argument("choose_scale: gamma must be >= 1");
  choice.gamma_value = gamma_value;
  const int nu = minimum_capacity(h);
  const double base = std::max(1.0, config.alpha * std::pow(gamma_value, 1.0 / nu));
  std::vector<char> active(static_cast<size_t>(h.num_vertices()), 1);
  double rho = base;
  const int max_doublings = 10;
  for (int d = 0;; ++d) {
    double min_violation = 0.0;
    bool any = false;
    for (int v = 0; v < h.num_vertices(); ++v) {
      if (x[static_cast<size_t>(v)] <= 0.0) continue;
      Rng vr(config.seed, RngStream::calibration,
             (static_cast<std::uint64_t>(d) << 32) ^ static_cast<std::uint64_t>(v));
      const double p = estimate_violation_probability(h, v, active, x, rho, vr, 256);
      if (!any || p < min_violation) min_violation = p;
      any = true;
    }
    if (!any || min_violation <= 0.25) {
      choice.rho = rho;
      choice.doublings = d;
      return choice;
    }
    if (d >= max_doublings) {
      choice.rho = rho;
      choice.doublings = d;
      choice.calibration_warning = true;
      return choice;
    }
    rho *= 2.0;
  }
}

// Crude VC-style complexity estimate of the edge system, by probing random
// small vertex subsets for shattering. Clamped to [2, 6].
inline int estimate_vc_dimension(const Hypergraph& h, Rng& rng) {
  const int n = h.num_vertices();
  int best = 2;
  for (int k = 2; k <= 6; ++k) {
    if (n < k || h.num_edges() == 0) break;
    bool shattered_found = false;
    for (int probe = 0; probe < 60 && !shattered_found; ++probe) {
      std::vector<int> s;
      while (static_cast<int>(s.size()) < k) {
        int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
        if (std::find(s.begin(), s.end(), v) == s.end()) s.push_back(v);
      }
      std::sort(s.begin(), s.end());
      std::vector<char> seen(static_cast<size_t>(1) << k, 0);
      seen[0] = 1;  // the empty trace is realized by any edge missing s entirely
      int count = 1;
      for (const Hyperedge& e : h.edges) {
        unsigned mask = 0;
        for (int i = 0; i < k; ++i)
          if (std::binary_search(e.vertices.begin(), e.vertices.end(), s[static_cast<size_t>(i)]))
            mask |= 1u << i;
        if (!seen[mask]) {
          seen[mask] = 1;
          ++count;
        }
      }
      if (count == (1 << k)) shattered_found = true;
    }
    if (shattered_found)
      best = k;
    else
      break;
  }
  return best;
}

struct SparsifyResult {
  std::vector<int> counts;   // integer masses t_v
  int t_scale = 0;           // T
  int denominator = 0;       // 2T; y_v = counts[v] / denominator
  std::vector<double> y;
  double objective = 0.0;
  double energy = 0.0;
  bool success = false;
  int attempts = 0;
  int vc_dimension = 2;
};

// Rounds the fractional solution to integer multiples of 1/(2T) while keeping
// every edge integrally feasible at denominator scale, at least 1/12 of the
// fractional objective, and energy within [E/4, 4E]. Retries with fresh
// randomness; returns the best attempt if none fully succeeds.
inline SparsifyResult sparsify(const Hypergraph& h, const FractionalSolution& lp,
                               const SolverConfig& config = {}) {
  const int n = h.num_vertices();
  if (static_cast<int>(lp.values.size()) != n)
    throw std::invalid_argument("sparsify: size mismatch");
  Rng vc_rng(config.seed, RngStream::vc_probe);
  const int d = estimate_vc_dimension(h, vc_rng);
  const double e_for_log = std::max(lp.energy, 2.0);
  const int t_scale = std::max(16, static_cast<int>(std::ceil(8.0 * d * std::log(e_for_log))));
  const int denom = 2 * t_scale;

  SparsifyResult best;
  best.vc_dimension = d;
  best.t_scale = t_scale;
  best.denominator = denom;
  double best_rank = -std::numeric_limits<double>::infinity();

  const int attempts = std::max(1, config.max_sparsify_attempts);
  for (int a = 0; a < attempts; ++a) {
    Rng rng(config.seed, RngStream::sparsify, static_cast<std::uint64_t>(a));
    SparsifyResult cur;
    cur.vc_dimension = d;
    cur.t_scale = t_scale;
    cur.denominator = denom;
    cur.counts.assign(static_cast<size_t>(n), 0);
    cur.y.assign(static_cast<size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
      const double scaled = lp.values[static_cast<size_t>(v)] * t_scale;
      const double fl = std::floor(scaled);
      int t = static_cast<int>(fl);
      if (rng.bernoulli(scaled - fl)) ++t;
      cur.counts[static_cast<size_t>(v)] = t;
      cur.y[static_cast<size_t>(v)] = static_cast<double>(t) / denom;
      cur.objective += h.vertex_weights[static_cast<size_t>(v)] * cur.y[static_cast<size_t>(v)];
      cur.energy += cur.y[static_cast<size_t>(v)];
    }
    bool edges_ok = true;
    for (const Hyperedge& e : h.edges) {
      long long s = 0;
      for (int v : e.vertices) s += cur.counts[static_cast<size_t>(v)];
      if (s > static_cast<long long>(denom) * e.capacity) {
        edges_ok = false;
        break;
      }
    }
    const bool obj_ok = cur.objective >= lp.objective / 12.0 - 1e-12;
    const bool energy_ok =
        cur.energy >= lp.energy / 4.0 - 1e-12 && cur.energy <= 4.0 * lp.energy + 1e-12;
    cur.success = edges_ok && obj_ok && energy_ok;
    cur.attempts = a + 1;
    const double rank = (cur.success ? 1e18 : 0.0) + (edges_ok ? 1e9 : 0.0) + cur.objective;
    if (rank > best_rank) {
      best_rank = rank;
      best = cur;
    }
    if (cur.success) break;
  }
  return best;
}

// Runs the subsolver k times on the still-unchosen vertices with every
// capacity forced to one, accumulating the union of the rounds' winners.
inline PackingSolution uniform_capacity_peel(
    const Hypergraph& h, int k,
    const std::function<PackingSolution(const Hypergraph&)>& subsolver) {
  if (k < 1) throw std::invalid_argument("uniform_capacity_peel: k must be >= 1");
  std::vector<int> remaining(static_cast<size_t>(h.num_vertices()));
  for (int v = 0; v < h.num_vertices(); ++v) remaining[static_cast<size_t>(v)] = v;
  std::vector<int> chosen;
  for (int round = 0; round < k && !remaining.empty(); ++round) {
    InducedSubhypergraph sub = induced_subhypergraph(h, remaining);
    for (Hyperedge& e : sub.hypergraph.edges) e.capacity = 1;
    PackingSolution part = subsolver(sub.hypergraph);
    if (part.chosen.empty()) break;
    std::vector<char> taken(sub.hypergraph.num_vertices(), 0);
    for (int v : part.chosen) {
      chosen.push_back(sub.to_original.at(static_cast<size_t>(v)));
      taken[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> next;
    for (int v = 0; v < sub.hypergraph.num_vertices(); ++v)
      if (!taken[static_cast<size_t>(v)]) next.push_back(sub.to_original[static_cast<size_t>(v)]);
    remaining = std::move(next);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  PackingSolution sol = check_packing(h, chosen, k);
  sol.bicriteria_bound = k;
  return sol;
}

struct PackReport {
  PackingSolution best;
  FractionalSolution fractional;
  ScaleChoice scale;
  int trials_run = 0;
  std::vector<double> trial_weights;
};

// Full pipeline: fractional solve, scale choice, ordering, repeated
// rounding+alteration trials, best trial wins (ties to the earliest trial).
inline PackReport pack_hypergraph(const Hypergraph& h, const SolverConfig& config = {}) {
  h.validate();
  PackReport report;
  if (h.num_vertices() == 0) {
    report.best.feasible = true;
    return report;
  }
  report.fractional = build_and_solve_lp(h, config.lp_tol);
  report.scale = choose_scale(h, report.fractional.values, report.fractional.energy, config);
  const Ordering ordering = build_ordering(h, report.fractional.values, report.scale.rho, config);

  const int trials = std::max(1, config.trials);
  std::vector<PackingSolution> results(static_cast<size_t>(trials));
  auto run_range = [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      Rng rng(config.seed, RngStream::trials, static_cast<std::uint64_t>(t));
      results[static_cast<size_t>(t)] =
          round_with_alteration(h, report.fractional.values, report.scale.rho, ordering, rng);
    }
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1 || trials == 1) {
    run_range(0, trials);
  } else {
    const int chunk = (trials + threads - 1) / threads;
    std::vector<std::future<void>> futs;
    for (int lo = 0; lo < trials; lo += chunk)
      futs.push_back(std::async(std::launch::async, run_range, lo, std::min(trials, lo + chunk)));
    for (auto& f : futs) f.get();
  }
  int best_idx = 0;
  report.trial_weights.reserve(static_cast<size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    report.trial_weights.push_back(results[static_cast<size_t>(t)].weight);
    if (results[static_cast<size_t>(t)].weight > results[static_cast<size_t>(best_idx)].weight)
      best_idx = t;
  }
  report.best = std::move(results[static_cast<size_t>(best_idx)]);
  report.trials_run = trials;
  return report;
}

}  // namespace geopack
