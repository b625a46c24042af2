#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// Capacitated hypergraph packing substrate: the data model plus feasibility
// checking, conflict enumeration, and capacity manipulation. A solution is a
// vertex subset X; it is feasible when |X ∩ h| <= cap(h) for every edge h.

namespace geopack {

struct Hyperedge {
  std::vector<int> vertices;  // sorted, unique
  int capacity = 1;
  std::string label;  // optional note on where the edge came from (e.g. source point id)
};

struct Hypergraph {
  std::vector<double> vertex_weights;
  std::vector<Hyperedge> edges;
  std::vector<std::string> vertex_labels;  // optional, may be empty

  int num_vertices() const { return static_cast<int>(vertex_weights.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  void validate() const {
    const int n = num_vertices();
    for (double w : vertex_weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("vertex weight must be finite and >= 0");
    }
    for (const Hyperedge& e : edges) {
      if (e.capacity < 1) throw std::invalid_argument("edge capacity must be >= 1");
      int prev = -1;
      for (int v : e.vertices) {
        if (v < 0 || v >= n) throw std::invalid_argument("edge references vertex out of range");
        if (v == prev) throw std::invalid_argument("duplicate vertex inside one edge");
        prev = v;
      }
      if (!std::is_sorted(e.vertices.begin(), e.vertices.end()))
        throw std::invalid_argument("edge vertex list must be sorted");
    }
  }
};

// A (k+1)-subset of a capacity-k edge: the minimal witness of a potential
// capacity violation.
struct Conflict {
  std::vector<int> vertices;  // sorted, size = capacity(witness_edge) + 1
  int witness_edge = -1;
  int order = 0;  // the witness edge's capacity
};

struct PackingSolution {
  std::vector<int> chosen;          // sorted vertex indices
  double weight = 0.0;              // sum of chosen vertex weights
  std::vector<int> edge_loads;      // |chosen ∩ h| per edge
  int bicriteria_bound = 1;         // beta; 1 means strict feasibility
  bool feasible = false;            // every load <= max(cap, beta)
};

// Sentinel for instances with no edges: every subset is feasible.
inline constexpr int kUnconstrainedCapacity = std::numeric_limits<int>::max();

inline int minimum_capacity(const Hypergraph& h) {
  if (h.edges.empty()) return kUnconstrainedCapacity;
  int m = kUnconstrainedCapacity;
  for (const Hyperedge& e : h.edges) m = std::min(m, e.capacity);
  return m;
}

struct InducedSubhypergraph {
  Hypergraph hypergraph;
  std::vector<int> to_original;   // new index -> original index
  std::vector<int> from_original; // original index -> new index or -1
};

inline InducedSubhypergraph induced_subhypergraph(const Hypergraph& h, const std::vector<int>& subset) {
  const int n = h.num_vertices();
  InducedSubhypergraph out;
  out.from_original.assign(n, -1);
  std::vector<int> sorted = subset;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (int v : sorted) {
    if (v < 0 || v >= n) throw std::invalid_argument("induced_subhypergraph: vertex index out of range");
    out.from_original[v] = static_cast<int>(out.to_original.size());
    out.to_original.push_back(v);
    out.hypergraph.vertex_weights.push_back(h.vertex_weights[v]);
    if (!h.vertex_labels.empty()) out.hypergraph.vertex_labels.push_back(h.vertex_labels[v]);
  }
  for (const Hyperedge& e : h.edges) {
    Hyperedge ne;
    ne.capacity = e.capacity;
    ne.label = e.label;
    for (int v : e.vertices)
      if (out.from_original[v] >= 0) ne.vertices.push_back(out.from_original[v]);
    if (!ne.vertices.empty()) out.hypergraph.edges.push_back(std::move(ne));
  }
  return out;
}

inline PackingSolution check_packing(const Hypergraph& h, const std::vector<int>& chosen, int beta = 1) {
  if (beta < 1) throw std::invalid_argument("check_packing: beta must be >= 1");
  const int n = h.num_vertices();
  PackingSolution sol;
  sol.bicriteria_bound = beta;
  std::vector<char> in(n, 0);
  for (int v : chosen) {
    if (v < 0 || v >= n) throw std::invalid_argument("check_packing: vertex index out of range");
    if (!in[v]) {
      in[v] = 1;
      sol.chosen.push_back(v);
      sol.weight += h.vertex_weights[v];
    }
  }
  std::sort(sol.chosen.begin(), sol.chosen.end());
  sol.edge_loads.reserve(h.edges.size());
  sol.feasible = true;
  for (const Hyperedge& e : h.edges) {
    int load = 0;
    for (int v : e.vertices) load += in[v];
    sol.edge_loads.push_back(load);
    if (load > std::max(e.capacity, beta)) sol.feasible = false;
  }
  return sol;
}

struct ConflictEnumeration {
  std::vector<Conflict> conflicts;
  bool truncated = false;
};

// Streams every (cap+1)-subset of (h ∩ A) for every edge h, in lexicographic
// order, to `sink`. Returns false (truncated) once `budget` conflicts have
// been emitted. Exact-resistance callers must require no truncation.
inline bool for_each_conflict(const Hypergraph& h, const std::vector<int>& active,
                              const std::function<void(const Conflict&)>& sink,
                              std::int64_t budget = 10'000'000) {
  const int n = h.num_vertices();
  std::vector<char> in(n, 0);
  for (int v : active) {
    if (v < 0 || v >= n) throw std::invalid_argument("for_each_conflict: vertex index out of range");
    in[v] = 1;
  }
  std::int64_t emitted = 0;
  for (int ei = 0; ei < h.num_edges(); ++ei) {
    const Hyperedge& e = h.edges[ei];
    std::vector<int> members;
    for (int v : e.vertices)
      if (in[v]) members.push_back(v);
    const int k = e.capacity;
    const int m = static_cast<int>(members.size());
    if (m < k + 1) continue;
    // lexicographic (k+1)-subset walk over `members` (already sorted)
    std::vector<int> idx(k + 1);
    for (int i = 0; i <= k; ++i) idx[i] = i;
    Conflict c;
    c.witness_edge = ei;
    c.order = k;
    c.vertices.resize(k + 1);
    while (true) {
      if (emitted >= budget) return false;
      for (int i = 0; i <= k; ++i) c.vertices[i] = members[idx[i]];
      sink(c);
      ++emitted;
      int pos = k;
      while (pos >= 0 && idx[pos] == m - (k + 1 - pos)) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i <= k; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return true;
}

inline ConflictEnumeration enumerate_conflicts(const Hypergraph& h, const std::vector<int>& active,
                                               std::int64_t budget = 10'000'000) {
  ConflictEnumeration out;
  out.truncated = !for_each_conflict(
      h, active, [&out](const Conflict& c) { out.conflicts.push_back(c); }, budget);
  return out;
}

inline Hypergraph relax_capacities(const Hypergraph& h, int phi) {
  if (phi < 1) throw std::invalid_argument("relax_capacities: phi must be >= 1");
  Hypergraph out = h;
  for (Hyperedge& e : out.edges) e.capacity = std::max(e.capacity, phi);
  return out;
}

inline double subset_weight(const Hypergraph& h, const std::vector<int>& subset) {
  double w = 0.0;
  for (int v : subset) w += h.vertex_weights.at(static_cast<size_t>(v));
  return w;
}

}  // namespace geopack
