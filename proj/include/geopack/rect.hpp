#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geopack/core.hpp"
#include "geopack/geometry.hpp"
#include "geopack/lp.hpp"
#include "geopack/rounding.hpp"

// Rectangle and box machinery: skyline canonical rectangles, the recursive
// median-split canonical set with exact two-piece query covers, the greedy
// Turan independent-set routine, interval-tree packing of rects/boxes into
// capacitated points, and the beta=2 pipeline packing points into rects.

namespace geopack {

struct SkylineCanonical {
  Rect rect;
  int point = -1;                // index of the point the top edge passes through
  int left_count = 0;            // points taken strictly left of it
  int right_count = 0;           // points taken strictly right of it
  std::vector<int> contained;    // exactly the point indices inside, sorted
};

namespace detail {

// Core enumeration for points strictly above a baseline. Heights must be > 0.
// Emits one canonical per (p, i <= k left, j <= k right), sides through the
// i-th / j-th nearest lower points.
inline std::vector<SkylineCanonical> skyline_core(const std::vector<Point2>& pts,
                                                  const std::vector<double>& heights, int k) {
  const int n = static_cast<int>(pts.size());
  std::vector<SkylineCanonical> out;
  for (int pi = 0; pi < n; ++pi) {
    std::vector<int> left, right;  // lower-set points on each side of pts[pi]
    for (int q = 0; q < n; ++q) {
      if (q == pi || heights[q] > heights[pi]) continue;
      if (pts[q].x < pts[pi].x)
        left.push_back(q);
      else
        right.push_back(q);
    }
    std::sort(left.begin(), left.end(),
              [&pts](int a, int b) { return pts[a].x > pts[b].x; });  // nearest first
    std::sort(right.begin(), right.end(),
              [&pts](int a, int b) { return pts[a].x < pts[b].x; });
    const int imax = std::min<int>(k, static_cast<int>(left.size()));
    const int jmax = std::min<int>(k, static_cast<int>(right.size()));
    for (int i = 0; i <= imax; ++i) {
      for (int j = 0; j <= jmax; ++j) {
        SkylineCanonical c;
        c.point = pi;
        c.left_count = i;
        c.right_count = j;
        const double xlo = i == 0 ? pts[pi].x : pts[left[i - 1]].x;
        const double xhi = j == 0 ? pts[pi].x : pts[right[j - 1]].x;
        c.rect = Rect{{xlo, 0.0}, {xhi, heights[pi]}};  // caller rebases y
        for (int t = 0; t < i; ++t) c.contained.push_back(left[t]);
        c.contained.push_back(pi);
        for (int t = 0; t < j; ++t) c.contained.push_back(right[t]);
        std::sort(c.contained.begin(), c.contained.end());
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace detail

// Canonical rectangles whose bottom edge lies on the x-axis: every axis
// rectangle grounded on the axis that holds at most k+1 points realizes the
// same point subset as one of these.
inline std::vector<SkylineCanonical> skyline_canonicals_detailed(const std::vector<Point2>& pts,
                                                                 int k) {
  if (k < 0) throw std::invalid_argument("skyline: k must be non-negative");
  std::vector<double> heights;
  for (const Point2& p : pts) {
    if (!(p.y > 0.0)) throw std::invalid_argument("skyline: all points must have y > 0");
    heights.push_back(p.y);
  }
  return detail::skyline_core(pts, heights, k);
}

inline std::vector<Rect> skyline_canonical_rects(const std::vector<Point2>& pts, int k) {
  std::vector<Rect> out;
  for (const SkylineCanonical& c : skyline_canonicals_detailed(pts, k)) out.push_back(c.rect);
  return out;
}

// ---------------------------------------------------------------------------
// Canonical rectangle set over a general-position point set: a horizontal
// median-split recursion whose per-node skylines (looking up and down from the
// split line) cover every axis rectangle holding <= k points by at most two
// canonicals with exactly matching point sets.

struct CanonicalRectSet {
  std::vector<Rect> canonical;
  std::vector<std::vector<int>> canonical_points;   // sorted point ids per canonical
  std::vector<std::pair<int, int>> conflict_edges;  // pairs co-occurring in a canonical
  int k = 0;

  struct Node {
    double split_y = 0.0;
    int lo = -1, hi = -1;
    int leaf_point = -1;
    int leaf_canonical = -1;
  };
  std::vector<Node> nodes;
  int root = -1;
  std::vector<Point2> points;
  std::map<std::array<int, 5>, int> lookup;  // {node, side(0 down,1 up), point, i, j} -> id

  // Exact cover of a query rectangle holding <= k points: at most two
  // canonical ids whose point sets partition the query's point set.
  std::vector<int> resolve_cover(const Rect& q) const {
    std::vector<int> ids;
    if (root < 0) return ids;
    int cur = root;
    while (true) {
      const Node& nd = nodes[static_cast<size_t>(cur)];
      if (nd.leaf_point >= 0) {
        const Point2& p = points[static_cast<size_t>(nd.leaf_point)];
        if (rect_contains(q, p.x, p.y)) ids.push_back(nd.leaf_canonical);
        return ids;
      }
      if (q.hi.y < nd.split_y) {
        cur = nd.lo;
        continue;
      }
      if (q.lo.y > nd.split_y) {
        cur = nd.hi;
        continue;
      }
      // query crosses this node's line: resolve both halves right here
      for (int side = 0; side <= 1; ++side) {
        std::vector<int> c;
        for (size_t t = 0; t < points.size(); ++t) {
          if (!rect_contains(q, points[t].x, points[t].y)) continue;
          const bool up = points[t].y > nd.split_y;
          if ((side == 1) == up) c.push_back(static_cast<int>(t));
        }
        if (c.empty()) continue;
        // side 0 looks down from the line, so its apex is the lowest point
        int p = c[0];
        for (int t : c)
          if ((points[static_cast<size_t>(t)].y > points[static_cast<size_t>(p)].y) ==
              (side == 1))
            p = t;
        int i = 0, j = 0;
        for (int t : c) {
          if (points[static_cast<size_t>(t)].x < points[static_cast<size_t>(p)].x) ++i;
          if (points[static_cast<size_t>(t)].x > points[static_cast<size_t>(p)].x) ++j;
        }
        if (i > k || j > k)
          throw std::invalid_argument("resolve_cover: query holds more than k points");
        auto it = lookup.find({cur, side, p, i, j});
        if (it == lookup.end()) throw std::logic_error("resolve_cover: missing canonical");
        ids.push_back(it->second);
      }
      return ids;
    }
  }
};

inline CanonicalRectSet canonical_rect_set(const std::vector<Point2>& pts, int k) {
  if (k < 0) throw std::invalid_argument("canonical_rect_set: k must be non-negative");
  CanonicalRectSet out;
  out.k = k;
  out.points = pts;
  {
    std::set<double> xs, ys;
    for (const Point2& p : pts) {
      if (!xs.insert(p.x).second || !ys.insert(p.y).second)
        throw std::invalid_argument(
            "canonical_rect_set: duplicate coordinate; perturb the input (generator jitter)");
    }
  }
  std::set<std::pair<int, int>> edges;

  std::function<int(std::vector<int>&)> build = [&](std::vector<int>& ids) -> int {
    const int me = static_cast<int>(out.nodes.size());
    out.nodes.emplace_back();
    if (ids.size() == 1) {
      const int p = ids[0];
      out.nodes[static_cast<size_t>(me)].leaf_point = p;
      SkylineCanonical c;
      c.point = p;
      const Point2& pt = pts[static_cast<size_t>(p)];
      c.rect = Rect{{pt.x, pt.y}, {pt.x, pt.y}};
      c.contained = {p};
      out.nodes[static_cast<size_t>(me)].leaf_canonical = static_cast<int>(out.canonical.size());
      out.canonical.push_back(c.rect);
      out.canonical_points.push_back(c.contained);
      return me;
    }
    std::sort(ids.begin(), ids.end(), [&pts](int a, int b) {
      return pts[static_cast<size_t>(a)].y < pts[static_cast<size_t>(b)].y;
    });
    const size_t m = ids.size() / 2;
    const double split =
        (pts[static_cast<size_t>(ids[m - 1])].y + pts[static_cast<size_t>(ids[m])].y) / 2.0;
    out.nodes[static_cast<size_t>(me)].split_y = split;
    std::vector<int> down(ids.begin(), ids.begin() + static_cast<long>(m));
    std::vector<int> up(ids.begin() + static_cast<long>(m), ids.end());

    for (int side = 0; side <= 1; ++side) {
      const std::vector<int>& group = side == 1 ? up : down;
      std::vector<Point2> local;
      std::vector<double> heights;
      for (int g : group) {
        local.push_back(pts[static_cast<size_t>(g)]);
        heights.push_back(side == 1 ? pts[static_cast<size_t>(g)].y - split
                                    : split - pts[static_cast<size_t>(g)].y);
      }
      std::vector<SkylineCanonical> cs = detail::skyline_core(local, heights, k);
      for (SkylineCanonical& c : cs) {
        const int gp = group[static_cast<size_t>(c.point)];
        std::vector<int> contained;
        for (int loc : c.contained) contained.push_back(group[static_cast<size_t>(loc)]);
        std::sort(contained.begin(), contained.end());
        Rect r = c.rect;
        if (side == 1) {
          r.lo.y = split;
          r.hi.y = pts[static_cast<size_t>(gp)].y;
        } else {
          r.lo.y = pts[static_cast<size_t>(gp)].y;
          r.hi.y = split;
        }
        if (r.lo.x > r.hi.x) std::swap(r.lo.x, r.hi.x);
        const int id = static_cast<int>(out.canonical.size());
        out.canonical.push_back(r);
        out.canonical_points.push_back(contained);
        out.lookup[{me, side, gp, c.left_count, c.right_count}] = id;
      }
      // conflict pairs come from each point's maximal canonical on this side
      for (int g : group) {
        int best = -1;
        size_t best_size = 0;
        for (int i = k; i >= 0 && best < 0; --i)
          for (int j = k; j >= 0 && best < 0; --j) {
            auto it = out.lookup.find({me, side, g, i, j});
            if (it != out.lookup.end()) {
              best = it->second;
              best_size = out.canonical_points[static_cast<size_t>(best)].size();
            }
          }
        if (best < 0) continue;
        const std::vector<int>& cp = out.canonical_points[static_cast<size_t>(best)];
        for (size_t a = 0; a < best_size; ++a)
          for (size_t b = a + 1; b < best_size; ++b) edges.insert({cp[a], cp[b]});
      }
    }
    out.nodes[static_cast<size_t>(me)].lo = build(down);
    out.nodes[static_cast<size_t>(me)].hi = build(up);
    return me;
  };

  if (!pts.empty()) {
    std::vector<int> ids(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) ids[i] = static_cast<int>(i);
    out.root = build(ids);
  }
  out.conflict_edges.assign(edges.begin(), edges.end());
  return out;
}

// ---------------------------------------------------------------------------
// Greedy constructive Turan bound: repeatedly take the vertex maximizing
// w_v / (deg(v)+1) and delete its closed neighborhood. The output is an
// independent set of weight at least sum_v w_v / (deg_G(v)+1).

inline std::vector<int> turan_weighted_is(int n, const std::vector<std::pair<int, int>>& edges,
                                          const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != n)
    throw std::invalid_argument("turan: weight count mismatch");
  std::vector<std::set<int>> adj(static_cast<size_t>(n));
  for (const auto& e : edges) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n || e.first == e.second)
      throw std::invalid_argument("turan: bad edge");
    adj[static_cast<size_t>(e.first)].insert(e.second);
    adj[static_cast<size_t>(e.second)].insert(e.first);
  }
  std::vector<char> alive(static_cast<size_t>(n), 1);
  std::vector<int> degree(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) degree[static_cast<size_t>(v)] = static_cast<int>(adj[static_cast<size_t>(v)].size());
  std::vector<int> chosen;
  int remaining = n;
  while (remaining > 0) {
    int best = -1;
    double best_ratio = -1.0;
    for (int v = 0; v < n; ++v) {
      if (!alive[static_cast<size_t>(v)]) continue;
      const double ratio = weights[static_cast<size_t>(v)] / (degree[static_cast<size_t>(v)] + 1.0);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = v;
      }
    }
    chosen.push_back(best);
    std::vector<int> removed = {best};
    for (int u : adj[static_cast<size_t>(best)])
      if (alive[static_cast<size_t>(u)]) removed.push_back(u);
    for (int u : removed) {
      alive[static_cast<size_t>(u)] = 0;
      --remaining;
      for (int w : adj[static_cast<size_t>(u)])
        if (alive[static_cast<size_t>(w)]) --degree[static_cast<size_t>(w)];
    }
  }
  std::sort(chosen.begin(), chosen.end());
  for (size_t a = 0; a < chosen.size(); ++a)
    for (size_t b = a + 1; b < chosen.size(); ++b)
      if (adj[static_cast<size_t>(chosen[a])].count(chosen[b]))
        throw std::logic_error("turan: output not independent");
  return chosen;
}

// ---------------------------------------------------------------------------
// Interval-tree pipelines packing weighted regions into capacitated points.

namespace detail {

struct IntervalTreeNode {
  std::vector<int> stabbed;  // region ids crossing this node's line
  int depth = 0;
};

// Generic 1D interval tree by median lower-endpoint line; collects the
// stabbed sets per node with their depths.
inline void build_interval_tree(const std::vector<int>& ids,
                                const std::function<double(int)>& lo,
                                const std::function<double(int)>& hi, int depth,
                                std::vector<IntervalTreeNode>& nodes) {
  if (ids.empty()) return;
  std::vector<int> sorted = ids;
  std::sort(sorted.begin(), sorted.end(), [&lo](int a, int b) {
    if (lo(a) != lo(b)) return lo(a) < lo(b);
    return a < b;
  });
  const double line = lo(sorted[sorted.size() / 2]);
  IntervalTreeNode node;
  node.depth = depth;
  std::vector<int> left, right;
  for (int id : sorted) {
    if (hi(id) < line)
      left.push_back(id);
    else if (lo(id) > line)
      right.push_back(id);
    else
      node.stabbed.push_back(id);
  }
  nodes.push_back(std::move(node));
  build_interval_tree(left, lo, hi, depth + 1, nodes);
  build_interval_tree(right, lo, hi, depth + 1, nodes);
}

// Union per depth, keep the best depth by total weight, validated against the
// full hypergraph (same-depth nodes hold point-disjoint regions).
inline PackingSolution best_level_union(const Hypergraph& full,
                                        const std::vector<std::pair<int, std::vector<int>>>&
                                            node_solutions /* (depth, region ids) */) {
  std::map<int, std::vector<int>> by_depth;
  for (const auto& ns : node_solutions) {
    auto& acc = by_depth[ns.first];
    acc.insert(acc.end(), ns.second.begin(), ns.second.end());
  }
  PackingSolution best = check_packing(full, {}, 1);
  bool have = false;
  for (auto& kv : by_depth) {
    PackingSolution cand = check_packing(full, kv.second, 1);
    if (!cand.feasible)
      throw std::logic_error("level union infeasible: tree separation violated");
    if (!have || cand.weight > best.weight) {
      best = std::move(cand);
      have = true;
    }
  }
  return best;
}

// Greedy completion: add unchosen vertices in weight order while every edge
// stays within its capacity bound.
inline void augment_greedy(const Hypergraph& h, PackingSolution& sol, int beta) {
  std::vector<std::vector<int>> incident(static_cast<size_t>(h.num_vertices()));
  for (int ei = 0; ei < h.num_edges(); ++ei)
    for (int v : h.edges[ei].vertices) incident[static_cast<size_t>(v)].push_back(ei);
  std::vector<int> load = sol.edge_loads;
  if (static_cast<int>(load.size()) != h.num_edges()) load.assign(static_cast<size_t>(h.num_edges()), 0);
  std::vector<char> in(static_cast<size_t>(h.num_vertices()), 0);
  for (int v : sol.chosen) in[static_cast<size_t>(v)] = 1;
  std::vector<int> order;
  for (int v = 0; v < h.num_vertices(); ++v)
    if (!in[static_cast<size_t>(v)]) order.push_back(v);
  std::sort(order.begin(), order.end(), [&h](int a, int b) {
    if (h.vertex_weights[static_cast<size_t>(a)] != h.vertex_weights[static_cast<size_t>(b)])
      return h.vertex_weights[static_cast<size_t>(a)] > h.vertex_weights[static_cast<size_t>(b)];
    return a < b;
  });
  for (int v : order) {
    bool ok = true;
    for (int ei : incident[static_cast<size_t>(v)]) {
      const int bound = std::max(h.edges[ei].capacity, beta);
      if (load[static_cast<size_t>(ei)] + 1 > bound) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (int ei : incident[static_cast<size_t>(v)]) ++load[static_cast<size_t>(ei)];
    sol.chosen.push_back(v);
  }
  std::sort(sol.chosen.begin(), sol.chosen.end());
  PackingSolution rechecked = check_packing(h, sol.chosen, beta);
  rechecked.bicriteria_bound = beta;
  if (!rechecked.feasible) throw std::logic_error("augmentation broke feasibility");
  sol = std::move(rechecked);
}

inline SolverConfig node_config(const SolverConfig& config, std::uint64_t node_tag) {
  SolverConfig c = config;
  c.gamma_override = 1.0;
  c.seed = config.seed ^ (0x9e3779b97f4a7c15ULL * (node_tag + 1));
  return c;
}

}  // namespace detail

// Packs weighted axis rectangles against capacitated points. Builds an
// interval tree on the rectangles' x-extents; each node's stabbed set shares a
// vertical line, so the rounding pipeline runs there with gamma = 1; the best
// tree level is kept and greedily completed.
inline PackingSolution pack_rects_into_points(const GeometricInstance& inst,
                                              const SolverConfig& config = {}) {
  if (inst.direction != PackDirection::pack_regions)
    throw std::invalid_argument("pack_rects_into_points: direction must be pack_regions");
  for (const GeomRegion& r : inst.regions)
    if (!std::holds_alternative<Rect>(r.shape))
      throw std::invalid_argument("pack_rects_into_points: all regions must be rects");
  const BuiltHypergraph full = build_hypergraph(inst);
  if (inst.regions.empty()) return check_packing(full.hypergraph, {}, 1);

  std::vector<int> ids(inst.regions.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  std::vector<detail::IntervalTreeNode> nodes;
  detail::build_interval_tree(
      ids, [&inst](int id) { return std::get<Rect>(inst.regions[static_cast<size_t>(id)].shape).lo.x; },
      [&inst](int id) { return std::get<Rect>(inst.regions[static_cast<size_t>(id)].shape).hi.x; }, 0,
      nodes);

  std::vector<std::pair<int, std::vector<int>>> node_solutions(nodes.size());
  auto solve_node = [&](size_t t) {
    const detail::IntervalTreeNode& nd = nodes[t];
    GeometricInstance sub;
    sub.direction = PackDirection::pack_regions;
    sub.region_class = "rect";
    sub.points = inst.points;
    for (int id : nd.stabbed) sub.regions.push_back(inst.regions[static_cast<size_t>(id)]);
    const BuiltHypergraph bh = build_hypergraph(sub);
    const PackReport rep = pack_hypergraph(bh.hypergraph, detail::node_config(config, t));
    std::vector<int> orig;
    for (int v : rep.best.chosen) orig.push_back(nd.stabbed[static_cast<size_t>(v)]);
    node_solutions[t] = {nd.depth, std::move(orig)};
  };
  const int threads = std::max(1, config.threads);
  if (threads == 1 || nodes.size() <= 1) {
    for (size_t t = 0; t < nodes.size(); ++t) solve_node(t);
  } else {
    std::vector<std::future<void>> futs;
    const size_t chunk = (nodes.size() + threads - 1) / threads;
    for (size_t lo = 0; lo < nodes.size(); lo += chunk)
      futs.push_back(std::async(std::launch::async, [&, lo] {
        for (size_t t = lo; t < std::min(nodes.size(), lo + chunk); ++t) solve_node(t);
      }));
    for (auto& f : futs) f.get();
  }

  PackingSolution best = detail::best_level_union(full.hypergraph, node_solutions);
  detail::augment_greedy(full.hypergraph, best, 1);
  return best;
}

namespace detail {

// Shared layer logic for the box pipeline: build a 1D interval tree on the
// given axis, solve each node's stabbed set via `leaf`, union per level.
inline PackingSolution box_layer(const GeometricInstance& inst, const std::vector<int>& ids,
                                 int axis,
                                 const std::function<PackingSolution(const std::vector<int>&,
                                                                     std::uint64_t)>& leaf,
                                 std::uint64_t tag) {
  auto lo = [&inst, axis](int id) {
    const Box& b = std::get<Box>(inst.regions[static_cast<size_t>(id)].shape);
    return axis == 0 ? b.lo.x : axis == 1 ? b.lo.y : b.lo.z;
  };
  auto hi = [&inst, axis](int id) {
    const Box& b = std::get<Box>(inst.regions[static_cast<size_t>(id)].shape);
    return axis == 0 ? b.hi.x : axis == 1 ? b.hi.y : b.hi.z;
  };
  std::vector<IntervalTreeNode> nodes;
  build_interval_tree(ids, lo, hi, 0, nodes);
  // hypergraph restricted to this id set, for level-union validation
  GeometricInstance sub;
  sub.direction = PackDirection::pack_regions;
  sub.region_class = "box";
  sub.points = inst.points;
  for (int id : ids) sub.regions.push_back(inst.regions[static_cast<size_t>(id)]);
  const BuiltHypergraph bh = build_hypergraph(sub);
  std::map<int, int> to_local;
  for (size_t i = 0; i < ids.size(); ++i) to_local[ids[i]] = static_cast<int>(i);

  std::vector<std::pair<int, std::vector<int>>> node_solutions;
  for (size_t t = 0; t < nodes.size(); ++t) {
    PackingSolution part = leaf(nodes[t].stabbed, tag * 1315423911ULL + t);
    std::vector<int> local;
    for (int id : part.chosen) local.push_back(to_local.at(id));
    node_solutions.emplace_back(nodes[t].depth, std::move(local));
  }
  PackingSolution best_local = best_level_union(bh.hypergraph, node_solutions);
  PackingSolution out;
  for (int v : best_local.chosen) out.chosen.push_back(ids[static_cast<size_t>(v)]);
  std::sort(out.chosen.begin(), out.chosen.end());
  out.weight = best_local.weight;
  out.feasible = true;
  return out;
}

}  // namespace detail

// Packs weighted boxes against capacitated 3D points with a three-layer
// interval tree (x, then y, then z); the innermost stabbed sets share a common
// point and run through the rounding pipeline with gamma = 1.
inline PackingSolution pack_boxes_into_points(const GeometricInstance& inst,
                                              const SolverConfig& config = {}) {
  if (inst.direction != PackDirection::pack_regions)
    throw std::invalid_argument("pack_boxes_into_points: direction must be pack_regions");
  for (const GeomRegion& r : inst.regions)
    if (!std::holds_alternative<Box>(r.shape))
      throw std::invalid_argument("pack_boxes_into_points: all regions must be boxes");
  const BuiltHypergraph full = build_hypergraph(inst);
  if (inst.regions.empty()) return check_packing(full.hypergraph, {}, 1);

  auto solve_pipeline = [&inst, &config](const std::vector<int>& box_ids,
                                         std::uint64_t tag) -> PackingSolution {
    GeometricInstance sub;
    sub.direction = PackDirection::pack_regions;
    sub.region_class = "box";
    sub.points = inst.points;
    for (int id : box_ids) sub.regions.push_back(inst.regions[static_cast<size_t>(id)]);
    const BuiltHypergraph bh = build_hypergraph(sub);
    const PackReport rep = pack_hypergraph(bh.hypergraph, detail::node_config(config, tag));
    PackingSolution out;
    for (int v : rep.best.chosen) out.chosen.push_back(box_ids[static_cast<size_t>(v)]);
    std::sort(out.chosen.begin(), out.chosen.end());
    out.weight = rep.best.weight;
    out.feasible = true;
    return out;
  };
  auto solve_z = [&inst, &solve_pipeline](const std::vector<int>& box_ids,
                                          std::uint64_t tag) -> PackingSolution {
    return detail::box_layer(inst, box_ids, 2, solve_pipeline, tag);
  };
  auto solve_y = [&inst, &solve_z](const std::vector<int>& box_ids,
                                   std::uint64_t tag) -> PackingSolution {
    return detail::box_layer(inst, box_ids, 1, solve_z, tag);
  };
  std::vector<int> ids(inst.regions.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  PackingSolution best = detail::box_layer(inst, ids, 0, solve_y, 1);

  PackingSolution rechecked = check_packing(full.hypergraph, best.chosen, 1);
  if (!rechecked.feasible) throw std::logic_error("box pipeline produced infeasible solution");
  detail::augment_greedy(full.hypergraph, rechecked, 1);
  return rechecked;
}

// ---------------------------------------------------------------------------
// Packing weighted points into capacitated rectangles, bi-criteria beta = 2.

inline PackingSolution pack_points_into_rects(const GeometricInstance& inst,
                                              const SolverConfig& config = {},
                                              bool* sparsify_fallback = nullptr) {
  if (sparsify_fallback) *sparsify_fallback = false;
  if (inst.direction != PackDirection::pack_points)
    throw std::invalid_argument("pack_points_into_rects: direction must be pack_points");
  for (const GeomRegion& r : inst.regions)
    if (!std::holds_alternative<Rect>(r.shape))
      throw std::invalid_argument("pack_points_into_rects: all regions must be rects");
  const BuiltHypergraph full = build_hypergraph(inst);
  const Hypergraph& h = full.hypergraph;
  const int n = h.num_vertices();

  // Rectangles whose capacity covers every contained point can never bind.
  std::vector<int> binding;  // edge ids of h
  for (int ei = 0; ei < h.num_edges(); ++ei)
    if (static_cast<int>(h.edges[ei].vertices.size()) > h.edges[ei].capacity) binding.push_back(ei);

  std::vector<char> covered(static_cast<size_t>(std::max(1, n)), 0);
  for (int ei : binding)
    for (int v : h.edges[ei].vertices) covered[static_cast<size_t>(v)] = 1;
  std::vector<int> unconstrained;
  for (int v = 0; v < n; ++v)
    if (!covered[static_cast<size_t>(v)]) unconstrained.push_back(v);

  if (binding.empty()) {
    PackingSolution all = check_packing(h, unconstrained, 2);
    all.bicriteria_bound = 2;
    return all;
  }
  // distinct coordinates are required by the canonical machinery
  {
    std::set<double> xs, ys;
    for (const GeomPoint& p : inst.points)
      if (!xs.insert(p.x).second || !ys.insert(p.y).second)
        throw std::invalid_argument(
            "pack_points_into_rects: duplicate coordinate; perturb the input");
  }

  Hypergraph hb;
  hb.vertex_weights = h.vertex_weights;
  for (int ei : binding) hb.edges.push_back(h.edges[ei]);
  const FractionalSolution lp = build_and_solve_lp(hb, config.lp_tol);

  // Sweep-split every binding rectangle into exactly ceil(cap/3) x-runs of
  // its points, closing a run when its fractional mass exceeds 3 (so each run
  // carries mass at most 4).
  struct Piece {
    std::vector<int> members;
  };
  std::vector<Piece> pieces;
  for (size_t b = 0; b < binding.size(); ++b) {
    const Hyperedge& e = hb.edges[b];
    std::vector<int> members = e.vertices;
    std::sort(members.begin(), members.end(), [&inst](int a, int bb) {
      if (inst.points[static_cast<size_t>(a)].x != inst.points[static_cast<size_t>(bb)].x)
        return inst.points[static_cast<size_t>(a)].x < inst.points[static_cast<size_t>(bb)].x;
      return a < bb;
    });
    const int target = (e.capacity + 2) / 3;
    std::vector<std::vector<int>> runs;
    std::vector<int> cur;
    double mass = 0.0;
    for (int v : members) {
      cur.push_back(v);
      mass += lp.values[static_cast<size_t>(v)];
      if (mass > 3.0) {
        runs.push_back(cur);
        cur.clear();
        mass = 0.0;
      }
    }
    if (!cur.empty()) runs.push_back(cur);
    if (static_cast<int>(runs.size()) > target)
      throw std::logic_error("rect split produced too many pieces");
    while (static_cast<int>(runs.size()) < target) runs.emplace_back();
    for (auto& run : runs) pieces.push_back({std::move(run)});
  }

  // Unit-capacity instance over the non-empty pieces, fractional value x/4.
  Hypergraph hu;
  hu.vertex_weights = h.vertex_weights;
  for (const Piece& p : pieces) {
    if (p.members.empty()) continue;
    Hyperedge e;
    e.vertices = p.members;
    std::sort(e.vertices.begin(), e.vertices.end());
    e.capacity = 1;
    hu.edges.push_back(std::move(e));
  }
  FractionalSolution quarter;
  quarter.values.assign(static_cast<size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    quarter.values[static_cast<size_t>(v)] =
        std::min(1.0, std::max(0.0, lp.values[static_cast<size_t>(v)] / 4.0));
    quarter.objective += h.vertex_weights[static_cast<size_t>(v)] * quarter.values[static_cast<size_t>(v)];
    quarter.energy += quarter.values[static_cast<size_t>(v)];
  }
  const SparsifyResult sp = sparsify(hu, quarter, config);
  std::vector<int> counts = sp.counts;
  if (!sp.success) {
    if (sparsify_fallback) *sparsify_fallback = true;
    counts.assign(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
      if (quarter.values[static_cast<size_t>(v)] > 0.0) counts[static_cast<size_t>(v)] = 1;
  }

  std::vector<int> support;
  for (int v = 0; v < n; ++v)
    if (counts[static_cast<size_t>(v)] > 0) support.push_back(v);
  std::vector<int> support_pos(static_cast<size_t>(n), -1);
  for (size_t i = 0; i < support.size(); ++i) support_pos[static_cast<size_t>(support[i])] = static_cast<int>(i);

  int k_hat = 0;
  for (const Piece& p : pieces) {
    int c = 0;
    for (int v : p.members)
      if (support_pos[static_cast<size_t>(v)] >= 0) ++c;
    k_hat = std::max(k_hat, c);
  }

  std::vector<int> core_chosen;
  if (!support.empty() && k_hat >= 1) {
    if (static_cast<double>(support.size()) * (k_hat + 1) * (k_hat + 1) > 2e6)
      throw std::runtime_error("pack_points_into_rects: instance too large for canonical set");
    std::vector<Point2> sp_pts;
    for (int v : support)
      sp_pts.push_back({inst.points[static_cast<size_t>(v)].x, inst.points[static_cast<size_t>(v)].y});
    const CanonicalRectSet crs = canonical_rect_set(sp_pts, k_hat);
    std::set<std::pair<int, int>> canonical_pairs;  // global point ids
    for (const auto& pr : crs.conflict_edges) {
      int u = support[static_cast<size_t>(pr.first)], v = support[static_cast<size_t>(pr.second)];
      canonical_pairs.insert({std::min(u, v), std::max(u, v)});
    }
    // replicated copies: counts[v] copies of v, each with full weight
    std::vector<int> copy_owner;
    std::vector<int> first_copy(static_cast<size_t>(n), -1);
    for (int v : support) {
      first_copy[static_cast<size_t>(v)] = static_cast<int>(copy_owner.size());
      for (int c = 0; c < counts[static_cast<size_t>(v)]; ++c) copy_owner.push_back(v);
    }
    std::set<std::pair<int, int>> copy_edges;
    for (int v : support) {
      const int f = first_copy[static_cast<size_t>(v)], t = counts[static_cast<size_t>(v)];
      for (int a = 0; a < t; ++a)
        for (int b = a + 1; b < t; ++b) copy_edges.insert({f + a, f + b});
    }
    for (const Piece& p : pieces) {
      for (size_t a = 0; a < p.members.size(); ++a) {
        if (support_pos[static_cast<size_t>(p.members[a])] < 0) continue;
        for (size_t b = a + 1; b < p.members.size(); ++b) {
          if (support_pos[static_cast<size_t>(p.members[b])] < 0) continue;
          int u = p.members[a], v = p.members[b];
          if (u > v) std::swap(u, v);
          if (!canonical_pairs.count({u, v})) continue;
          for (int ca = 0; ca < counts[static_cast<size_t>(u)]; ++ca)
            for (int cb = 0; cb < counts[static_cast<size_t>(v)]; ++cb)
              copy_edges.insert({first_copy[static_cast<size_t>(u)] + ca,
                                 first_copy[static_cast<size_t>(v)] + cb});
        }
      }
    }
    std::vector<double> copy_weights;
    for (int owner : copy_owner)
      copy_weights.push_back(h.vertex_weights[static_cast<size_t>(owner)]);
    std::vector<std::pair<int, int>> edge_list(copy_edges.begin(), copy_edges.end());
    const std::vector<int> winners =
        turan_weighted_is(static_cast<int>(copy_owner.size()), edge_list, copy_weights);
    std::set<int> uniq;
    for (int c : winners) uniq.insert(copy_owner[static_cast<size_t>(c)]);
    core_chosen.assign(uniq.begin(), uniq.end());
  }

  std::vector<int> chosen = core_chosen;
  chosen.insert(chosen.end(), unconstrained.begin(), unconstrained.end());
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  PackingSolution sol = check_packing(h, chosen, 2);
  if (!sol.feasible)
    throw std::logic_error("pack_points_into_rects: core solution violates beta=2");
  detail::augment_greedy(h, sol, 2);
  sol.bicriteria_bound = 2;
  return sol;
}

}  // namespace geopack
