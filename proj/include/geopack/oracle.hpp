#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "geopack/core.hpp"

// Exact optimum for small instances by depth-first branch and bound. This is
// the ground truth every approximation ratio in the test suite is measured
// against, so it stays deliberately simple and single-threaded.

namespace geopack {

struct OracleResult {
  double optimal_weight = 0.0;
  std::vector<int> optimal_set;  // sorted original vertex indices
  std::int64_t nodes_explored = 0;
  bool proven_optimal = false;
};

namespace detail {

struct OracleSearch {
  const Hypergraph* h;
  std::vector<int> order;           // vertices in descending weight
  std::vector<double> suffix_weight;
  std::vector<std::vector<int>> incident;  // per vertex: edge ids
  std::vector<int> load;
  std::vector<char> in_set;
  std::vector<int> current;
  std::int64_t budget;
  std::int64_t nodes = 0;
  bool aborted = false;
  double best = 0.0;
  std::vector<int> best_set;

  void dfs(int pos, double cur_weight) {
    ++nodes;
    if (nodes > budget) {
      aborted = true;
      return;
    }
    if (cur_weight > best) {
      best = cur_weight;
      best_set = current;
    }
    if (pos == static_cast<int>(order.size())) return;
    if (cur_weight + suffix_weight[pos] <= best) return;  // cannot improve
    const int v = order[pos];
    // include v if no incident edge is already full
    bool ok = true;
    for (int ei : incident[v]) {
      if (load[ei] + 1 > h->edges[ei].capacity) {
        ok = false;
        break;
      }
    }
    if (ok) {
      for (int ei : incident[v]) ++load[ei];
      current.push_back(v);
      dfs(pos + 1, cur_weight + h->vertex_weights[v]);
      current.pop_back();
      for (int ei : incident[v]) --load[ei];
      if (aborted) return;
    }
    dfs(pos + 1, cur_weight);
  }
};

}  // namespace detail

inline OracleResult exact_pack(const Hypergraph& h, std::int64_t node_budget = 50'000'000) {
  h.validate();
  detail::OracleSearch s;
  s.h = &h;
  s.budget = node_budget;
  const int n = h.num_vertices();
  s.order.resize(n);
  std::iota(s.order.begin(), s.order.end(), 0);
  std::stable_sort(s.order.begin(), s.order.end(), [&h](int a, int b) {
    if (h.vertex_weights[a] != h.vertex_weights[b]) return h.vertex_weights[a] > h.vertex_weights[b];
    return a < b;
  });
  s.suffix_weight.assign(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) s.suffix_weight[i] = s.suffix_weight[i + 1] + h.vertex_weights[s.order[i]];
  s.incident.assign(n, {});
  for (int ei = 0; ei < h.num_edges(); ++ei)
    for (int v : h.edges[ei].vertices) s.incident[v].push_back(ei);
  s.load.assign(h.num_edges(), 0);
  s.dfs(0, 0.0);

  OracleResult r;
  r.optimal_weight = s.best;
  r.optimal_set = s.best_set;
  std::sort(r.optimal_set.begin(), r.optimal_set.end());
  r.nodes_explored = s.nodes;
  r.proven_optimal = !s.aborted;
  return r;
}

}  // namespace geopack
