#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geopack/core.hpp"
#include "geopack/geometry.hpp"
#include "geopack/lp.hpp"
#include "geopack/rect.hpp"
#include "geopack/rounding.hpp"

// Fat-triangle machinery: a measure partition covering a triangle with at
// most 18k similar copies of itself (each holding at most a 1/k share of the
// point mass), a brute-force canonical region set answering fat-triangle
// queries with small exact covers, and the beta=9 pipeline packing weighted
// points into capacitated fat triangles.

namespace geopack {

struct TriangleCover {
  std::vector<Triangle> pieces;       // similar copies of the source
  std::vector<double> ratios;         // similarity ratio per piece
  std::vector<int> orientations;      // +1 same orientation, -1 point-reflected
  std::vector<double> masses;         // mass captured by each piece
  int k = 1;
  Triangle source;
};

namespace detail {

// Cells of the midpoint subdivision, in source-triangle frame coordinates
// (point = A + a*(B-A) + b*(C-A)). sigma=-1 cells are point-reflected and
// span from their anchor towards decreasing frame coordinates.
struct FrameCell {
  double a = 0.0, b = 0.0, s = 1.0;
  int sigma = 1;
};

inline FrameCell cell_child(const FrameCell& c, int which) {
  const double h = c.s / 2.0;
  FrameCell r;
  r.s = h;
  switch (which) {
    case 0: r.a = c.a; r.b = c.b; r.sigma = c.sigma; break;
    case 1: r.a = c.a + c.sigma * h; r.b = c.b; r.sigma = c.sigma; break;
    case 2: r.a = c.a; r.b = c.b + c.sigma * h; r.sigma = c.sigma; break;
    default: r.a = c.a + c.sigma * h; r.b = c.b + c.sigma * h; r.sigma = -c.sigma; break;
  }
  return r;
}

inline FrameCell cell_from_path(const std::vector<int>& path) {
  FrameCell c;
  for (int w : path) c = cell_child(c, w);
  return c;
}

// One subdivision step on unit-cell local coordinates; returns the child
// index and maps (x, y) into that child's local frame.
inline int cover_locate_step(double& x, double& y) {
  if (x > 0.5) { x = 2.0 * x - 1.0; y = 2.0 * y; return 1; }
  if (y > 0.5) { y = 2.0 * y; y -= 1.0; x = 2.0 * x; return 2; }
  if (x + y < 0.5) { x = 2.0 * x; y = 2.0 * y; return 0; }
  x = 1.0 - 2.0 * x; y = 1.0 - 2.0 * y; return 3;
}

inline bool cell_contains_frame(const FrameCell& c, double p, double q) {
  const double dx = c.sigma * (p - c.a);
  const double dy = c.sigma * (q - c.b);
  return dx >= 0.0 && dy >= 0.0 && dx + dy <= c.s;
}

}  // namespace detail

// Covers the triangle with at most 18k similar copies, each holding at most
// mu/k of the supplied point mass (mu = total mass inside the triangle).
// Mass strictly outside the triangle is ignored; a single point carrying more
// than mu/k cannot be split and is rejected.
inline TriangleCover cover_triangle_by_measure(const Triangle& t, const std::vector<Point2>& pts,
                                               const std::vector<double>& masses, int k) {
  if (k < 1) throw std::invalid_argument("cover_triangle_by_measure: k must be >= 1");
  if (pts.size() != masses.size())
    throw std::invalid_argument("cover_triangle_by_measure: point/mass size mismatch");
  const double ux = t.b.x - t.a.x, uy = t.b.y - t.a.y;
  const double vx = t.c.x - t.a.x, vy = t.c.y - t.a.y;
  const double det = ux * vy - uy * vx;
  if (det == 0.0) throw std::invalid_argument("cover_triangle_by_measure: degenerate triangle");

  struct Pt {
    double p, q, mass;
    std::array<signed char, 80> path;
  };
  constexpr int kMaxDepth = 80;
  std::vector<Pt> kept;
  long double mu_acc = 0.0L;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (masses[i] < 0.0) throw std::invalid_argument("cover_triangle_by_measure: negative mass");
    if (masses[i] == 0.0) continue;
    const double dx = pts[i].x - t.a.x, dy = pts[i].y - t.a.y;
    const double p = (dx * vy - dy * vx) / det;
    const double q = (dy * ux - dx * uy) / det;
    if (p < 0.0 || q < 0.0 || p + q > 1.0) continue;  // outside mass ignored
    Pt e;
    e.p = p;
    e.q = q;
    e.mass = masses[i];
    double lx = p, ly = q;
    for (int d = 0; d < kMaxDepth; ++d) e.path[static_cast<size_t>(d)] =
        static_cast<signed char>(detail::cover_locate_step(lx, ly));
    kept.push_back(e);
    mu_acc += masses[i];
  }
  const double mu = static_cast<double>(mu_acc);

  TriangleCover cover;
  cover.k = k;
  cover.source = t;

  auto emit_cell = [&](const detail::FrameCell& c) {
    Triangle piece;
    piece.a = {t.a.x + c.a * ux + c.b * vx, t.a.y + c.a * uy + c.b * vy};
    const double e = c.sigma * c.s;
    piece.b = {piece.a.x + e * ux, piece.a.y + e * uy};
    piece.c = {piece.a.x + e * vx, piece.a.y + e * vy};
    long double m = 0.0L;
    for (const Pt& pt : kept)
      if (detail::cell_contains_frame(c, pt.p, pt.q)) m += pt.mass;
    cover.pieces.push_back(piece);
    cover.ratios.push_back(c.s);
    cover.orientations.push_back(c.sigma);
    cover.masses.push_back(static_cast<double>(m));
  };

  if (mu == 0.0 || k == 1) {
    emit_cell(detail::FrameCell{});
    return cover;
  }
  const double thresh = mu / k;
  {
    std::map<std::pair<double, double>, long double> atoms;
    for (const Pt& pt : kept) atoms[{pt.p, pt.q}] += pt.mass;
    for (const auto& kv : atoms)
      if (static_cast<double>(kv.second) > thresh + 1e-12)
        throw std::invalid_argument(
            "cover_triangle_by_measure: a single point carries more than mu/k mass");
  }

  // Repeatedly zero out the deepest cell still holding more than mu/k.
  std::vector<char> active(kept.size(), 1);
  std::vector<std::vector<int>> selected;
  while (true) {
    long double total = 0.0L;
    std::vector<int> live;
    for (size_t i = 0; i < kept.size(); ++i)
      if (active[i]) {
        live.push_back(static_cast<int>(i));
        total += kept[i].mass;
      }
    if (static_cast<double>(total) <= thresh) break;
    // Descend while some child still exceeds the threshold; the cell we stop
    // at keeps every strict descendant at or below mu/k, which is what the
    // per-piece mass bound rests on.
    std::vector<int> path;
    std::vector<int> idx = live;
    int depth = 0;
    while (depth < kMaxDepth) {
      int pick = -1;
      std::vector<int> pick_group;
      for (int c = 0; c < 4 && pick < 0; ++c) {
        std::vector<int> group;
        long double m = 0.0L;
        for (int i : idx)
          if (kept[static_cast<size_t>(i)].path[static_cast<size_t>(depth)] == c) {
            group.push_back(i);
            m += kept[static_cast<size_t>(i)].mass;
          }
        if (static_cast<double>(m) > thresh) {
          pick = c;
          pick_group = std::move(group);
        }
      }
      if (pick < 0) break;
      path.push_back(pick);
      idx = std::move(pick_group);
      ++depth;
    }
    for (int i : idx) active[static_cast<size_t>(i)] = 0;
    selected.push_back(path);
    if (static_cast<int>(selected.size()) > k)
      throw std::logic_error("cover_triangle_by_measure: selection exceeded k rounds");
  }

  // Ancestor closure: selected cells plus the root plus all pairwise
  // lowest common ancestors, so each node's marked descendants sit in
  // distinct quadrants.
  std::set<std::vector<int>> marked;
  marked.insert({});
  for (auto& p : selected) marked.insert(p);
  {
    std::vector<std::vector<int>> sorted(marked.begin(), marked.end());
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
      const auto& x = sorted[i];
      const auto& y = sorted[i + 1];
      std::vector<int> lca;
      for (size_t d = 0; d < std::min(x.size(), y.size()) && x[d] == y[d]; ++d)
        lca.push_back(x[d]);
      marked.insert(lca);
    }
  }
  std::vector<std::vector<int>> nodes(marked.begin(), marked.end());
  auto is_prefix = [](const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() >= b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin());
  };
  std::vector<std::vector<int>> children(nodes.size());
  {
    std::vector<size_t> stack;
    for (size_t i = 0; i < nodes.size(); ++i) {
      while (!stack.empty() && !is_prefix(nodes[stack.back()], nodes[i]) &&
             nodes[stack.back()] != nodes[i])
        stack.pop_back();
      if (!stack.empty() && i != stack.back()) children[stack.back()].push_back(static_cast<int>(i));
      stack.push_back(i);
    }
  }

  auto node_mass = [&](const std::vector<int>& path) {
    long double m = 0.0L;
    for (const Pt& pt : kept) {
      bool in = true;
      for (size_t d = 0; d < path.size(); ++d)
        if (pt.path[d] != path[d]) {
          in = false;
          break;
        }
      if (in) m += pt.mass;
    }
    return static_cast<double>(m);
  };

  auto emit_local = [&](const detail::FrameCell& qc, double la, double lb, double ls, int lsigma) {
    if (ls <= 1e-15) return;
    detail::FrameCell pc;
    pc.a = qc.a + qc.sigma * qc.s * la;
    pc.b = qc.b + qc.sigma * qc.s * lb;
    pc.s = qc.s * ls;
    pc.sigma = qc.sigma * lsigma;
    emit_cell(pc);
  };

  for (size_t vi = 0; vi < nodes.size(); ++vi) {
    const std::vector<int>& vpath = nodes[vi];
    const detail::FrameCell vcell = detail::cell_from_path(vpath);
    if (children[vi].empty() && node_mass(vpath) <= thresh + 1e-12) {
      emit_cell(vcell);
      continue;
    }
    std::array<int, 4> hole{-1, -1, -1, -1};
    for (int ci : children[vi]) {
      const int w = nodes[static_cast<size_t>(ci)][vpath.size()];
      if (hole[static_cast<size_t>(w)] >= 0)
        throw std::logic_error("cover: two marked descendants share a quadrant");
      hole[static_cast<size_t>(w)] = ci;
    }
    for (int w = 0; w < 4; ++w) {
      const detail::FrameCell qc = detail::cell_child(vcell, w);
      if (hole[static_cast<size_t>(w)] < 0) {
        emit_cell(qc);
        continue;
      }
      const std::vector<int>& hpath = nodes[static_cast<size_t>(hole[static_cast<size_t>(w)])];
      if (hpath.size() == vpath.size() + 1) continue;  // child covers the quadrant itself
      const detail::FrameCell hc = detail::cell_from_path(hpath);
      const double srel = hc.s / qc.s;
      const int sigrel = qc.sigma * hc.sigma;
      const double la = qc.sigma * (hc.a - qc.a) / qc.s;
      const double lb = qc.sigma * (hc.b - qc.b) / qc.s;
      if (sigrel > 0) {
        // hole keeps the quadrant's orientation: three corner copies plus
        // up to three reflected wedges hugging the hole
        emit_local(qc, 0.0, 0.0, la + lb, 1);
        emit_local(qc, la + srel, 0.0, 1.0 - la - srel, 1);
        emit_local(qc, 0.0, lb + srel, 1.0 - lb - srel, 1);
        if (la > 0.0) emit_local(qc, la, lb + srel, srel, -1);
        if (lb > 0.0) emit_local(qc, la + srel, lb, srel, -1);
        if (la + lb + srel < 1.0) emit_local(qc, la + srel, lb + srel, srel, -1);
      } else {
        // point-reflected hole: three corner copies suffice
        emit_local(qc, 0.0, 0.0, la + lb - srel, 1);
        emit_local(qc, la, 0.0, 1.0 - la, 1);
        emit_local(qc, 0.0, lb, 1.0 - lb, 1);
      }
    }
  }
  return cover;
}

// ---------------------------------------------------------------------------
// Canonical region set for fat-triangle queries, realized by brute-force
// subset enumeration over point-anchored witness shapes (desk scale).

struct FatCanonicalSet {
  int n = 0;
  int k = 0;
  double alpha_max = 1.0;
  std::vector<Point2> points;
  std::vector<std::uint64_t> masks;         // canonical subsets as bit masks
  std::vector<std::vector<int>> subsets;    // decoded, sorted point ids

  struct Cover {
    bool covered = false;
    std::vector<int> piece_ids;  // indices into masks/subsets, at most 9
  };

  // Greedy exact cover of a target subset by canonical subsets. Queries with
  // more than k points are outside the contract and report not-covered.
  Cover resolve_mask(std::uint64_t want) const {
    Cover out;
    if (static_cast<int>(__builtin_popcountll(want)) > k) return out;
    std::uint64_t remaining = want;
    for (int round = 0; round < 9 && remaining != 0; ++round) {
      int best = -1;
      int best_gain = 0;
      for (size_t i = 0; i < masks.size(); ++i) {
        if ((masks[i] & ~want) != 0) continue;  // must stay inside the target
        const int gain = static_cast<int>(__builtin_popcountll(masks[i] & remaining));
        if (gain > best_gain) {
          best_gain = gain;
          best = static_cast<int>(i);
        }
      }
      if (best < 0) break;
      out.piece_ids.push_back(best);
      remaining &= ~masks[static_cast<size_t>(best)];
    }
    out.covered = remaining == 0;
    if (!out.covered) out.piece_ids.clear();
    return out;
  }

  Cover resolve_cover(const Triangle& q) const {
    std::uint64_t want = 0;
    for (int i = 0; i < n; ++i)
      if (triangle_contains(q, points[static_cast<size_t>(i)].x, points[static_cast<size_t>(i)].y))
        want |= 1ULL << i;
    return resolve_mask(want);
  }
};

inline FatCanonicalSet canonical_fat_regions(const std::vector<Point2>& pts, int k,
                                             double alpha_max) {
  if (k < 1) throw std::invalid_argument("canonical_fat_regions: k must be >= 1");
  if (alpha_max < 1.0) throw std::invalid_argument("canonical_fat_regions: alpha_max must be >= 1");
  if (pts.size() > 64)
    throw std::runtime_error("canonical_fat_regions: desk-scale bound (64 points) exceeded");
  FatCanonicalSet out;
  out.n = static_cast<int>(pts.size());
  out.k = k;
  out.alpha_max = alpha_max;
  out.points = pts;
  const int n = out.n;
  std::set<std::uint64_t> seen;
  auto add = [&](std::uint64_t m) {
    if (m == 0) return;
    if (static_cast<int>(__builtin_popcountll(m)) > k) return;
    seen.insert(m);
  };
  for (int i = 0; i < n; ++i) add(1ULL << i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) add((1ULL << i) | (1ULL << j));

  // subsets cut by triangles anchored at three input points
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const Triangle tri{pts[static_cast<size_t>(a)], pts[static_cast<size_t>(b)],
                           pts[static_cast<size_t>(c)]};
        if (orientation(tri.a, tri.b, tri.c) == 0) continue;
        std::uint64_t m = 0;
        int count = 0;
        for (int i = 0; i < n && count <= k; ++i)
          if (triangle_contains(tri, pts[static_cast<size_t>(i)].x, pts[static_cast<size_t>(i)].y)) {
            m |= 1ULL << i;
            ++count;
          }
        if (count <= k) add(m);
      }

  // subsets cut by axis-anchored right wedges with +-45 degree hypotenuses
  for (int sx = -1; sx <= 1; sx += 2)
    for (int sy = -1; sy <= 1; sy += 2)
      for (int hsel = 0; hsel < 2; ++hsel)
        for (int sh = -1; sh <= 1; sh += 2) {
          auto keyh = [&](const Point2& p) {
            return sh * (hsel == 0 ? p.x + p.y : p.x - p.y);
          };
          std::vector<int> by_h(static_cast<size_t>(n));
          for (int i = 0; i < n; ++i) by_h[static_cast<size_t>(i)] = i;
          std::sort(by_h.begin(), by_h.end(), [&](int i, int j) {
            return keyh(pts[static_cast<size_t>(i)]) < keyh(pts[static_cast<size_t>(j)]);
          });
          std::vector<std::uint64_t> xmask(static_cast<size_t>(n)), ymask(static_cast<size_t>(n));
          for (int i = 0; i < n; ++i) {
            std::uint64_t mx = 0, my = 0;
            for (int j = 0; j < n; ++j) {
              if (sx * pts[static_cast<size_t>(j)].x >= sx * pts[static_cast<size_t>(i)].x)
                mx |= 1ULL << j;
              if (sy * pts[static_cast<size_t>(j)].y >= sy * pts[static_cast<size_t>(i)].y)
                my |= 1ULL << j;
            }
            xmask[static_cast<size_t>(i)] = mx;
            ymask[static_cast<size_t>(i)] = my;
          }
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const std::uint64_t base = xmask[static_cast<size_t>(i)] & ymask[static_cast<size_t>(j)];
              if (base == 0) continue;
              std::uint64_t m = 0;
              int count = 0;
              for (int h : by_h) {
                if (!(base >> h & 1ULL)) continue;
                m |= 1ULL << h;
                if (++count > k) break;
                add(m);
              }
            }
        }

  out.masks.assign(seen.begin(), seen.end());
  out.subsets.resize(out.masks.size());
  for (size_t i = 0; i < out.masks.size(); ++i)
    for (int b = 0; b < n; ++b)
      if (out.masks[i] >> b & 1ULL) out.subsets[i].push_back(b);
  return out;
}

// ---------------------------------------------------------------------------
// Packing weighted points into capacitated fat triangles, bi-criteria beta=9.

inline PackingSolution pack_points_into_fat_triangles(const GeometricInstance& inst,
                                                      const SolverConfig& config = {},
                                                      double alpha_max = 16.0,
                                                      bool* sparsify_fallback = nullptr) {
  if (sparsify_fallback) *sparsify_fallback = false;
  if (inst.direction != PackDirection::pack_points)
    throw std::invalid_argument("pack_points_into_fat_triangles: direction must be pack_points");
  for (const GeomRegion& r : inst.regions) {
    if (!std::holds_alternative<Triangle>(r.shape))
      throw std::invalid_argument("pack_points_into_fat_triangles: all regions must be triangles");
    if (triangle_fatness(std::get<Triangle>(r.shape)) > alpha_max + 1e-9)
      throw std::invalid_argument("pack_points_into_fat_triangles: triangle exceeds fatness bound");
  }
  const BuiltHypergraph full = build_hypergraph(inst);
  const Hypergraph& h = full.hypergraph;
  const int n = h.num_vertices();
  constexpr int kSplitCap = 4 * 18 * 9;  // capacity above which a triangle gets covered

  std::vector<int> binding;
  for (int ei = 0; ei < h.num_edges(); ++ei)
    if (static_cast<int>(h.edges[ei].vertices.size()) > h.edges[ei].capacity) binding.push_back(ei);
  std::vector<char> covered_v(static_cast<size_t>(std::max(1, n)), 0);
  for (int ei : binding)
    for (int v : h.edges[ei].vertices) covered_v[static_cast<size_t>(v)] = 1;
  std::vector<int> unconstrained;
  for (int v = 0; v < n; ++v)
    if (!covered_v[static_cast<size_t>(v)]) unconstrained.push_back(v);
  if (binding.empty()) {
    PackingSolution all = check_packing(h, unconstrained, 9);
    all.bicriteria_bound = 9;
    return all;
  }

  Hypergraph hb;
  hb.vertex_weights = h.vertex_weights;
  for (int ei : binding) hb.edges.push_back(h.edges[ei]);
  const FractionalSolution lp = build_and_solve_lp(hb, config.lp_tol);

  struct Piece {
    std::vector<int> members;
  };
  std::vector<Piece> pieces;
  for (size_t b = 0; b < binding.size(); ++b) {
    const Hyperedge& e = hb.edges[b];
    const int region_id = full.edge_source[static_cast<size_t>(binding[b])];
    const Triangle& tri = std::get<Triangle>(inst.regions[static_cast<size_t>(region_id)].shape);
    if (e.capacity <= kSplitCap) {
      pieces.push_back({e.vertices});
      continue;
    }
    std::vector<Point2> coords;
    std::vector<double> frac;
    double mu = 0.0;
    for (int v : e.vertices) {
      coords.push_back({inst.points[static_cast<size_t>(v)].x, inst.points[static_cast<size_t>(v)].y});
      frac.push_back(lp.values[static_cast<size_t>(v)]);
      mu += lp.values[static_cast<size_t>(v)];
    }
    const int kt = std::max(1, static_cast<int>(std::ceil(mu / kSplitCap)));
    const TriangleCover cover = cover_triangle_by_measure(tri, coords, frac, kt);
    for (const Triangle& piece_tri : cover.pieces) {
      Piece p;
      for (int v : e.vertices)
        if (triangle_contains(piece_tri, inst.points[static_cast<size_t>(v)].x,
                              inst.points[static_cast<size_t>(v)].y))
          p.members.push_back(v);
      if (!p.members.empty()) pieces.push_back(std::move(p));
    }
  }

  Hypergraph hu;
  hu.vertex_weights = h.vertex_weights;
  for (const Piece& p : pieces) {
    Hyperedge e;
    e.vertices = p.members;
    std::sort(e.vertices.begin(), e.vertices.end());
    e.vertices.erase(std::unique(e.vertices.begin(), e.vertices.end()), e.vertices.end());
    e.capacity = 1;
    hu.edges.push_back(std::move(e));
  }
  FractionalSolution scaled;
  scaled.values.assign(static_cast<size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    if (!covered_v[static_cast<size_t>(v)]) continue;  // already kept unconditionally
    scaled.values[static_cast<size_t>(v)] =
        std::min(1.0, std::max(0.0, lp.values[static_cast<size_t>(v)] / (4.0 * kSplitCap)));
    scaled.objective += h.vertex_weights[static_cast<size_t>(v)] * scaled.values[static_cast<size_t>(v)];
    scaled.energy += scaled.values[static_cast<size_t>(v)];
  }
  const SparsifyResult sp = sparsify(hu, scaled, config);
  std::vector<int> counts = sp.counts;
  if (!sp.success) {
    if (sparsify_fallback) *sparsify_fallback = true;
    counts.assign(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
      if (scaled.values[static_cast<size_t>(v)] > 0.0) counts[static_cast<size_t>(v)] = 1;
  }
  std::vector<int> support;
  for (int v = 0; v < n; ++v)
    if (counts[static_cast<size_t>(v)] > 0) support.push_back(v);
  std::vector<int> support_pos(static_cast<size_t>(std::max(1, n)), -1);
  for (size_t i = 0; i < support.size(); ++i)
    support_pos[static_cast<size_t>(support[i])] = static_cast<int>(i);

  std::vector<int> core_chosen;
  if (!support.empty()) {
    if (support.size() > 64)
      throw std::runtime_error(
          "pack_points_into_fat_triangles: support exceeds desk-scale bound (64)");
    int k_hat = 1;
    for (const Piece& p : pieces) {
      int c = 0;
      for (int v : p.members)
        if (support_pos[static_cast<size_t>(v)] >= 0) ++c;
      k_hat = std::max(k_hat, c);
    }
    std::vector<Point2> sp_pts;
    for (int v : support)
      sp_pts.push_back({inst.points[static_cast<size_t>(v)].x, inst.points[static_cast<size_t>(v)].y});
    const FatCanonicalSet canon = canonical_fat_regions(sp_pts, k_hat, alpha_max);

    std::set<std::pair<int, int>> conflict;  // global point id pairs
    for (const Piece& p : pieces) {
      std::vector<int> locals;
      std::uint64_t want = 0;
      for (int v : p.members)
        if (support_pos[static_cast<size_t>(v)] >= 0) {
          locals.push_back(support_pos[static_cast<size_t>(v)]);
          want |= 1ULL << support_pos[static_cast<size_t>(v)];
        }
      if (locals.size() <= 1) continue;
      const FatCanonicalSet::Cover cov = canon.resolve_mask(want);
      auto add_pairs = [&](const std::vector<int>& group) {
        for (size_t x = 0; x < group.size(); ++x)
          for (size_t y = x + 1; y < group.size(); ++y) {
            int u = support[static_cast<size_t>(group[x])];
            int v = support[static_cast<size_t>(group[y])];
            if (u > v) std::swap(u, v);
            conflict.insert({u, v});
          }
      };
      if (cov.covered) {
        for (int id : cov.piece_ids) {
          std::vector<int> group;
          for (int loc : locals)
            if (canon.masks[static_cast<size_t>(id)] >> loc & 1ULL) group.push_back(loc);
          add_pairs(group);
        }
      } else {
        add_pairs(locals);  // conservative clique keeps the load bound intact
      }
    }

    std::vector<int> copy_owner;
    std::vector<int> first_copy(static_cast<size_t>(std::max(1, n)), -1);
    for (int v : support) {
      first_copy[static_cast<size_t>(v)] = static_cast<int>(copy_owner.size());
      for (int c = 0; c < counts[static_cast<size_t>(v)]; ++c) copy_owner.push_back(v);
    }
    std::set<std::pair<int, int>> copy_edges;
    for (int v : support) {
      const int f = first_copy[static_cast<size_t>(v)], tcount = counts[static_cast<size_t>(v)];
      for (int a = 0; a < tcount; ++a)
        for (int b2 = a + 1; b2 < tcount; ++b2) copy_edges.insert({f + a, f + b2});
    }
    for (const auto& pr : conflict)
      for (int ca = 0; ca < counts[static_cast<size_t>(pr.first)]; ++ca)
        for (int cb = 0; cb < counts[static_cast<size_t>(pr.second)]; ++cb)
          copy_edges.insert({first_copy[static_cast<size_t>(pr.first)] + ca,
                             first_copy[static_cast<size_t>(pr.second)] + cb});
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
  PackingSolution sol = check_packing(h, chosen, 9);
  if (!sol.feasible)
    throw std::logic_error("pack_points_into_fat_triangles: core solution violates beta=9");
  detail::augment_greedy(h, sol, 9);
  sol.bicriteria_bound = 9;
  return sol;
}

}  // namespace geopack
