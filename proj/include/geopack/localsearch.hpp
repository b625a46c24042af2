#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "geopack/core.hpp"
#include "geopack/geometry.hpp"

// b-local search for packing unit-weight disks against unit-capacity points:
// grow a pointwise-independent set by swaps that insert at most b+1 disks and
// evict strictly fewer, plus an exhaustive verifier for the stopping
// condition.

namespace geopack {

struct SwapWitness {
  std::vector<int> insert_set;
  std::vector<int> remove_set;
};

struct LocalOptimality {
  bool locally_optimal = true;
  SwapWitness witness;  // populated only when an improving swap exists
};

namespace detail {

inline std::vector<std::vector<int>> disk_point_sets(const GeometricInstance& inst) {
  if (inst.direction != PackDirection::pack_regions)
    throw std::invalid_argument("local search: direction must be pack_regions");
  for (const GeomRegion& r : inst.regions) {
    if (!std::holds_alternative<Disk>(r.shape))
      throw std::invalid_argument("local search: all regions must be disks");
    if (r.weight != 1.0)
      throw std::invalid_argument("local search: disk weights must all be 1");
  }
  for (const GeomPoint& p : inst.points)
    if (p.capacity != 1)
      throw std::invalid_argument("local search: point capacities must all be 1");
  std::vector<std::vector<int>> ptset(inst.regions.size());
  for (size_t j = 0; j < inst.regions.size(); ++j)
    for (size_t i = 0; i < inst.points.size(); ++i)
      if (region_contains(inst.regions[j].shape, inst.points[i]))
        ptset[j].push_back(static_cast<int>(i));
  return ptset;
}

// Drops any disk that strictly contains another disk's nonempty point set
// (for equal sets, all but the lowest index). Replacing the container by the
// contained disk never shrinks a solution, so the optimum is unchanged.
inline std::vector<char> prune_containers(const std::vector<std::vector<int>>& ptset) {
  const int n = static_cast<int>(ptset.size());
  std::vector<char> kept(static_cast<size_t>(n), 1);
  auto subset_of = [](const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  };
  for (int d = 0; d < n; ++d)
    for (int w = 0; w < n && kept[static_cast<size_t>(d)]; ++w) {
      if (w == d || ptset[static_cast<size_t>(w)].empty()) continue;
      if (!subset_of(ptset[static_cast<size_t>(w)], ptset[static_cast<size_t>(d)])) continue;
      if (ptset[static_cast<size_t>(w)].size() == ptset[static_cast<size_t>(d)].size() && w > d)
        continue;  // equal sets: keep the lowest index
      kept[static_cast<size_t>(d)] = 0;
    }
  return kept;
}

// Lexicographic depth-first enumeration of insertion sets X (sorted indices,
// prefixes first). Returns true once `try_swap` accepts, with X/evicted left
// in the output parameters.
struct SwapSearch {
  const std::vector<std::vector<int>>& ptset;
  const std::vector<int>& candidates;     // insertable disks, ascending
  const std::vector<int>& point_owner;    // current disk covering each point, -1 if free
  int max_insert;

  std::vector<int> x;
  std::set<int> evicted;
  std::vector<char> point_used;  // points covered by X so far

  SwapSearch(const std::vector<std::vector<int>>& ps, const std::vector<int>& cand,
             const std::vector<int>& owner, int max_ins)
      : ptset(ps), candidates(cand), point_owner(owner), max_insert(max_ins),
        point_used(owner.size(), 0) {}

  bool run(size_t from) {
    for (size_t ci = from; ci < candidates.size(); ++ci) {
      const int d = candidates[ci];
      bool clash = false;
      for (int p : ptset[static_cast<size_t>(d)])
        if (point_used[static_cast<size_t>(p)]) {
          clash = true;
          break;
        }
      if (clash) continue;  // X must stay pointwise independent
      std::vector<int> newly_evicted;
      for (int p : ptset[static_cast<size_t>(d)]) {
        point_used[static_cast<size_t>(p)] = 1;
        const int o = point_owner[static_cast<size_t>(p)];
        if (o >= 0 && evicted.insert(o).second) newly_evicted.push_back(o);
      }
      x.push_back(d);
      if (static_cast<int>(evicted.size()) <= static_cast<int>(x.size()) - 1) return true;
      if (static_cast<int>(x.size()) < max_insert && run(ci + 1)) return true;
      x.pop_back();
      for (int o : newly_evicted) evicted.erase(o);
      for (int p : ptset[static_cast<size_t>(d)]) point_used[static_cast<size_t>(p)] = 0;
    }
    return false;
  }
};

inline bool find_improving_swap(const std::vector<std::vector<int>>& ptset,
                                const std::vector<char>& insertable,
                                const std::set<int>& current, int num_points, int b,
                                SwapWitness& out) {
  std::vector<int> owner(static_cast<size_t>(std::max(1, num_points)), -1);
  for (int d : current)
    for (int p : ptset[static_cast<size_t>(d)]) owner[static_cast<size_t>(p)] = d;
  std::vector<int> candidates;
  for (size_t d = 0; d < ptset.size(); ++d)
    if (insertable[d] && !current.count(static_cast<int>(d)))
      candidates.push_back(static_cast<int>(d));
  SwapSearch search(ptset, candidates, owner, b + 1);
  if (!search.run(0)) return false;
  out.insert_set = search.x;
  out.remove_set.assign(search.evicted.begin(), search.evicted.end());
  return true;
}

}  // namespace detail

inline PackingSolution local_search_disks(const GeometricInstance& inst, int b = 3) {
  if (b < 1 || b > 4) throw std::invalid_argument("local_search_disks: b must be in [1, 4]");
  const std::vector<std::vector<int>> ptset = detail::disk_point_sets(inst);
  const std::vector<char> kept = detail::prune_containers(ptset);
  const int n = static_cast<int>(ptset.size());
  const int np = static_cast<int>(inst.points.size());

  std::set<int> current;
  int rounds = 0;
  SwapWitness swap;
  while (detail::find_improving_swap(ptset, kept, current, np, b, swap)) {
    for (int d : swap.remove_set) current.erase(d);
    for (int d : swap.insert_set) current.insert(d);
    // every swap must grow the set and keep it pointwise independent
    std::vector<int> owner(static_cast<size_t>(std::max(1, np)), -1);
    for (int d : current)
      for (int p : ptset[static_cast<size_t>(d)]) {
        if (owner[static_cast<size_t>(p)] >= 0)
          throw std::logic_error("local_search_disks: swap broke independence");
        owner[static_cast<size_t>(p)] = d;
      }
    if (++rounds > n) throw std::logic_error("local_search_disks: more swaps than disks");
  }

  const BuiltHypergraph bh = build_hypergraph(inst);
  PackingSolution sol =
      check_packing(bh.hypergraph, std::vector<int>(current.begin(), current.end()), 1);
  if (!sol.feasible) throw std::logic_error("local_search_disks: infeasible result");
  return sol;
}

inline LocalOptimality verify_b_local_optimality(const GeometricInstance& inst,
                                                 const std::vector<int>& soln, int b = 3) {
  if (b < 1 || b > 4)
    throw std::invalid_argument("verify_b_local_optimality: b must be in [1, 4]");
  if (inst.regions.size() > 40)
    throw std::invalid_argument(
        "verify_b_local_optimality: exhaustive check capped at 40 disks");
  const std::vector<std::vector<int>> ptset = detail::disk_point_sets(inst);
  const std::vector<char> kept = detail::prune_containers(ptset);
  const int np = static_cast<int>(inst.points.size());

  std::set<int> current;
  std::vector<char> seen_point(static_cast<size_t>(std::max(1, np)), 0);
  for (int d : soln) {
    if (d < 0 || d >= static_cast<int>(ptset.size()))
      throw std::invalid_argument("verify_b_local_optimality: disk index out of range");
    if (!current.insert(d).second) continue;
    for (int p : ptset[static_cast<size_t>(d)]) {
      if (seen_point[static_cast<size_t>(p)])
        throw std::invalid_argument(
            "verify_b_local_optimality: input set is not pointwise independent");
      seen_point[static_cast<size_t>(p)] = 1;
    }
  }

  LocalOptimality out;
  SwapWitness swap;
  if (detail::find_improving_swap(ptset, kept, current, np, b, swap)) {
    // re-validate the witness before reporting it
    std::set<int> next = current;
    for (int d : swap.remove_set) next.erase(d);
    for (int d : swap.insert_set) next.insert(d);
    if (next.size() <= current.size())
      throw std::logic_error("verify_b_local_optimality: witness does not grow the set");
    std::vector<char> used(static_cast<size_t>(std::max(1, np)), 0);
    for (int d : next)
      for (int p : ptset[static_cast<size_t>(d)]) {
        if (used[static_cast<size_t>(p)])
          throw std::logic_error("verify_b_local_optimality: witness breaks independence");
        used[static_cast<size_t>(p)] = 1;
      }
    out.locally_optimal = false;
    out.witness = swap;
  }
  return out;
}

}  // namespace geopack
