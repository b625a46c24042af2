#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geopack/core.hpp"

// Fractional relaxation: maximize sum w_v x_v subject to
// sum_{v in h} x_v <= cap(h) per edge and 0 <= x_v <= 1.
//
// Solved with a bounded-variable revised simplex over an active working set
// of rows. Only edges with |h| > cap(h) can ever bind under the box bounds,
// and of those only violated ones are materialized, so the simplex never
// sees more rows than it needs. The solver is fully deterministic.

namespace geopack {

struct FractionalSolution {
  std::vector<double> values;     // x_v in [0,1]
  double objective = 0.0;         // sum w_v x_v
  double energy = 0.0;            // sum x_v
  double feasibility_slack = 0.0; // max over edges of (load - cap), <= tol
};

struct LpCertificate {
  std::vector<double> edge_duals;  // y >= 0, one per edge (0 off the working set)
  double dual_objective = 0.0;     // y.b + sum_j max(0, w_j - (A^T y)_j)
  int iterations = 0;
  int working_rows = 0;
  bool energy_warning = false;     // energy < 1 on a weighted instance
};

struct LpUnsolvedError : std::runtime_error {
  explicit LpUnsolvedError(const std::string& msg, FractionalSolution best_found)
      : std::runtime_error(msg), best(std::move(best_found)) {}
  FractionalSolution best;
};

inline double energy(const FractionalSolution& x) { return x.energy; }

inline double energy(const FractionalSolution& x, const std::vector<int>& subset) {
  double e = 0.0;
  for (int v : subset) e += x.values.at(static_cast<size_t>(v));
  return e;
}

namespace detail {

// Dense-inverse bounded simplex on: max c.x, A x + s = b, 0 <= x <= 1, s >= 0.
// Variable ids: [0, n) structural, [n, n+m) slack. Basis always has m members.
class BoundedSimplex {
 public:
  BoundedSimplex(const std::vector<double>& c, const std::vector<std::vector<int>>& rows,
                 const std::vector<double>& b)
      : c_(c), b_(b), n_(static_cast<int>(c.size())), m_(static_cast<int>(rows.size())) {
    col_rows_.assign(n_, {});
    for (int r = 0; r < m_; ++r)
      for (int v : rows[r]) col_rows_[v].push_back(r);
    basis_.resize(m_);
    for (int r = 0; r < m_; ++r) basis_[r] = n_ + r;  // all-slack start, x = 0 feasible
    in_basis_.assign(n_ + m_, 0);
    for (int j : basis_) in_basis_[j] = 1;
    at_upper_.assign(n_ + m_, 0);
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[idx(r, r)] = 1.0;
    xb_ = b_;  // slack values at x = 0
  }

  // Returns true on optimality, false on iteration exhaustion.
  bool solve(double tol, int max_iter, int* iters_out) {
    int stall = 0;
    double last_obj = -std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iter; ++it) {
      compute_duals();
      const bool bland = stall > 2 * (m_ + n_ + 16);
      int enter = pick_entering(tol, bland);
      if (enter < 0) break;  // optimal
      if (!step(enter, tol)) break;  // numerically stuck; duals say optimal enough
      double obj = objective();
      if (obj > last_obj + 1e-13 * (1.0 + std::fabs(obj))) {
        last_obj = obj;
        stall = 0;
      } else {
        ++stall;
      }
      if (pivots_since_refactor_ > 64) refactorize();
    }
    if (iters_out) *iters_out = it;
    compute_duals();
    return pick_entering(tol, true) < 0 || it < max_iter;
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(n_, 0.0);
    for (int j = 0; j < n_; ++j)
      if (!in_basis_[j] && at_upper_[j]) x[j] = 1.0;
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) x[basis_[r]] = xb_[r];
    return x;
  }

  // Row duals y = c_B B^{-1} (>= 0 at optimality of a <= system).
  std::vector<double> row_duals() {
    compute_duals();
    return y_;
  }

 private:
  size_t idx(int r, int ccol) const { return static_cast<size_t>(r) * m_ + ccol; }

  double objective() const {
    double obj = 0.0;
    for (int j = 0; j < n_; ++j)
      if (!in_basis_[j] && at_upper_[j]) obj += c_[j];
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < n_) obj += c_[basis_[r]] * xb_[r];
    return obj;
  }

  void compute_duals() {
    y_.assign(m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const int j = basis_[r];
      const double cb = j < n_ ? c_[j] : 0.0;
      if (cb == 0.0) continue;
      for (int k = 0; k < m_; ++k) y_[k] += cb * binv_[idx(r, k)];
    }
  }

  double reduced_cost(int j) const {
    if (j < n_) {
      double d = c_[j];
      for (int r : col_rows_[j]) d -= y_[r];
      return d;
    }
    return -y_[j - n_];
  }

  int pick_entering(double tol, bool bland) const {
    int best = -1;
    double best_score = tol;
    for (int j = 0; j < n_ + m_; ++j) {
      if (in_basis_[j]) continue;
      const double d = reduced_cost(j);
      const double score = at_upper_[j] ? -d : d;  // improvement direction
      if (score > tol) {
        if (bland) return j;
        if (score > best_score) {
          best_score = score;
          best = j;
        }
      }
    }
    return best;
  }

  // w = B^{-1} A_enter
  std::vector<double> ftran(int enter) const {
    std::vector<double> w(m_, 0.0);
    if (enter < n_) {
      for (int r : col_rows_[enter])
        for (int k = 0; k < m_; ++k) w[k] += binv_[idx(k, r)];
    } else {
      const int r = enter - n_;
      for (int k = 0; k < m_; ++k) w[k] = binv_[idx(k, r)];
    }
    return w;
  }

  bool step(int enter, double tol) {
    const double sigma = at_upper_[enter] ? -1.0 : 1.0;
    std::vector<double> w = ftran(enter);
    const double own_range = enter < n_ ? 1.0 : std::numeric_limits<double>::infinity();
    double t_max = own_range;
    int leave_pos = -1;
    bool leave_to_upper = false;
    for (int r = 0; r < m_; ++r) {
      const double dir = sigma * w[r];
      if (dir > 1e-11) {  // basic value decreases toward 0
        const double t = xb_[r] / dir;
        if (t < t_max - 1e-15 || (t < t_max + 1e-15 && (leave_pos < 0 || basis_[r] < basis_[leave_pos]))) {
          t_max = std::min(t_max, std::max(t, 0.0));
          leave_pos = r;
          leave_to_upper = false;
        }
      } else if (dir < -1e-11 && basis_[r] < n_) {  // structural basic rises toward 1
        const double t = (1.0 - xb_[r]) / (-dir);
        if (t < t_max - 1e-15 || (t < t_max + 1e-15 && (leave_pos < 0 || basis_[r] < basis_[leave_pos]))) {
          t_max = std::min(t_max, std::max(t, 0.0));
          leave_pos = r;
          leave_to_upper = true;
        }
      }
    }
    if (t_max == std::numeric_limits<double>::infinity()) {
      // Unbounded direction cannot happen with c >= 0 and x <= 1 boxes; slack
      // entering only decreases objective. Treat as numerically stuck.
      return false;
    }
    if (leave_pos < 0 || t_max >= own_range - 1e-15) {
      // bound flip: entering runs to its other bound, basis unchanged
      if (own_range == std::numeric_limits<double>::infinity()) return false;
      for (int r = 0; r < m_; ++r) xb_[r] -= sigma * own_range * w[r];
      at_upper_[enter] = !at_upper_[enter];
      return true;
    }
    // pivot: entering replaces basis_[leave_pos]
    for (int r = 0; r < m_; ++r) xb_[r] -= sigma * t_max * w[r];
    const int leave = basis_[leave_pos];
    in_basis_[leave] = 0;
    at_upper_[leave] = leave_to_upper;
    const double enter_value = (at_upper_[enter] ? 1.0 : 0.0) + sigma * t_max;
    basis_[leave_pos] = enter;
    in_basis_[enter] = 1;
    at_upper_[enter] = 0;
    xb_[leave_pos] = enter_value;
    // eta update of the dense inverse: row leave_pos scaled, others eliminated
    const double piv = w[leave_pos];
    if (std::fabs(piv) < 1e-13) {
      refactorize();
      return true;
    }
    for (int k = 0; k < m_; ++k) binv_[idx(leave_pos, k)] /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == leave_pos) continue;
      const double f = w[r];
      if (std::fabs(f) < 1e-300) continue;
      for (int k = 0; k < m_; ++k) binv_[idx(r, k)] -= f * binv_[idx(leave_pos, k)];
    }
    ++pivots_since_refactor_;
    (void)tol;
    return true;
  }

  void refactorize() {
    // rebuild binv_ = inverse of the basis matrix by Gauss-Jordan
    std::vector<double> mat(static_cast<size_t>(m_) * m_, 0.0);
    for (int col = 0; col < m_; ++col) {
      const int j = basis_[col];
      if (j < n_) {
        for (int r : col_rows_[j]) mat[idx(r, col)] = 1.0;
      } else {
        mat[idx(j - n_, col)] = 1.0;
      }
    }
    std::vector<double> inv(static_cast<size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) inv[idx(r, r)] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      double best = 1e-12;
      for (int r = col; r < m_; ++r)
        if (std::fabs(mat[idx(r, col)]) > best) {
          best = std::fabs(mat[idx(r, col)]);
          piv = r;
        }
      if (piv < 0) continue;  // numerically singular column; keep identity part
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(mat[idx(piv, k)], mat[idx(col, k)]);
          std::swap(inv[idx(piv, k)], inv[idx(col, k)]);
        }
      }
      const double p = mat[idx(col, col)];
      for (int k = 0; k < m_; ++k) {
        mat[idx(col, k)] /= p;
        inv[idx(col, k)] /= p;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = mat[idx(r, col)];
        if (f == 0.0) continue;
        for (int k = 0; k < m_; ++k) {
          mat[idx(r, k)] -= f * mat[idx(col, k)];
          inv[idx(r, k)] -= f * inv[idx(col, k)];
        }
      }
    }
    binv_ = std::move(inv);
    // refresh basic values: xb = binv (b - N x_N)
    std::vector<double> rhs = b_;
    for (int j = 0; j < n_; ++j)
      if (!in_basis_[j] && at_upper_[j])
        for (int r : col_rows_[j]) rhs[r] -= 1.0;
    for (int r = 0; r < m_; ++r) {
      double s = 0.0;
      for (int k = 0; k < m_; ++k) s += binv_[idx(r, k)] * rhs[k];
      xb_[r] = s;
    }
    pivots_since_refactor_ = 0;
  }

  std::vector<double> c_;
  std::vector<double> b_;
  int n_, m_;
  std::vector<std::vector<int>> col_rows_;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  std::vector<char> at_upper_;
  std::vector<double> binv_;
  std::vector<double> xb_;
  std::vector<double> y_;
  int pivots_since_refactor_ = 0;
};

}  // namespace detail

struct LpSolveReport {
  FractionalSolution solution;
  LpCertificate certificate;
};

inline LpSolveReport build_and_solve_lp_with_info(const Hypergraph& h, double tol = 1e-8) {
  if (!(tol > 0.0) || tol > 1e-3) throw std::invalid_argument("lp tol must be in (0, 1e-3]");
  h.validate();
  const int n = h.num_vertices();
  const std::vector<double>& w = h.vertex_weights;

  // Only edges with more vertices than capacity can bind under x <= 1.
  std::vector<int> candidates;
  for (int ei = 0; ei < h.num_edges(); ++ei)
    if (static_cast<int>(h.edges[ei].vertices.size()) > h.edges[ei].capacity) candidates.push_back(ei);

  std::vector<double> x(n, 0.0);
  for (int j = 0; j < n; ++j) x[j] = w[j] > 0.0 ? 1.0 : 0.0;

  std::vector<int> working;           // edge ids in the working set
  std::vector<char> in_working(h.num_edges(), 0);
  std::vector<double> duals(h.num_edges(), 0.0);
  int total_iters = 0;

  auto edge_load = [&h, &x](int ei) {
    double s = 0.0;
    for (int v : h.edges[ei].vertices) s += x[v];
    return s;
  };

  const int max_rounds = static_cast<int>(candidates.size()) + 8;
  for (int round = 0; round < max_rounds; ++round) {
    // collect violated candidate rows
    std::vector<std::pair<double, int>> violated;
    for (int ei : candidates) {
      if (in_working[ei]) continue;
      const double excess = edge_load(ei) - h.edges[ei].capacity;
      if (excess > tol) violated.emplace_back(excess, ei);
    }
    if (violated.empty()) break;
    std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    const int add = std::min<int>(64, static_cast<int>(violated.size()));
    for (int i = 0; i < add; ++i) {
      working.push_back(violated[i].second);
      in_working[violated[i].second] = 1;
    }

    std::vector<std::vector<int>> rows;
    std::vector<double> b;
    rows.reserve(working.size());
    for (int ei : working) {
      rows.push_back(h.edges[ei].vertices);
      b.push_back(static_cast<double>(h.edges[ei].capacity));
    }
    detail::BoundedSimplex simplex(w, rows, b);
    int iters = 0;
    const int max_iter = 50'000 + 200 * (n + static_cast<int>(working.size()));
    const bool ok = simplex.solve(tol * 0.1, max_iter, &iters);
    total_iters += iters;
    x = simplex.structural_values();
    std::vector<double> y = simplex.row_duals();
    std::fill(duals.begin(), duals.end(), 0.0);
    for (size_t k = 0; k < working.size(); ++k) duals[working[k]] = std::max(0.0, y[k]);
    if (!ok) {
      FractionalSolution best;
      best.values = x;
      for (double& v : best.values) v = std::min(1.0, std::max(0.0, v));
      for (int j = 0; j < n; ++j) best.objective += w[j] * best.values[j];
      for (double v : best.values) best.energy += v;
      throw LpUnsolvedError("lp solver exhausted its iteration limit", std::move(best));
    }
  }

  LpSolveReport rep;
  FractionalSolution& sol = rep.solution;
  sol.values = x;
  for (double& v : sol.values) v = std::min(1.0, std::max(0.0, v));  // may only decrease loads
  sol.objective = 0.0;
  sol.energy = 0.0;
  for (int j = 0; j < n; ++j) {
    sol.objective += w[j] * sol.values[j];
    sol.energy += sol.values[j];
  }
  sol.feasibility_slack = 0.0;
  for (int ei = 0; ei < h.num_edges(); ++ei) {
    double s = 0.0;
    for (int v : h.edges[ei].vertices) s += sol.values[v];
    sol.feasibility_slack = std::max(sol.feasibility_slack, s - h.edges[ei].capacity);
  }

  LpCertificate& cert = rep.certificate;
  cert.edge_duals = duals;
  cert.iterations = total_iters;
  cert.working_rows = static_cast<int>(working.size());
  cert.dual_objective = 0.0;
  std::vector<double> aty(n, 0.0);
  for (int ei = 0; ei < h.num_edges(); ++ei) {
    if (duals[ei] == 0.0) continue;
    cert.dual_objective += duals[ei] * h.edges[ei].capacity;
    for (int v : h.edges[ei].vertices) aty[v] += duals[ei];
  }
  for (int j = 0; j < n; ++j) cert.dual_objective += std::max(0.0, w[j] - aty[j]);
  bool any_weight = false;
  for (int j = 0; j < n; ++j) any_weight = any_weight || w[j] > 0.0;
  cert.energy_warning = any_weight && sol.energy < 1.0;
  return rep;
}

inline FractionalSolution build_and_solve_lp(const Hypergraph& h, double tol = 1e-8) {
  return build_and_solve_lp_with_info(h, tol).solution;
}

// Text dump in the classic LP exchange format, for cross-checks with external
// solvers.
inline std::string dump_lp_format(const Hypergraph& h) {
  std::ostringstream os;
  os.precision(17);
  os << "Maximize\n obj:";
  bool first = true;
  for (int j = 0; j < h.num_vertices(); ++j) {
    const double w = h.vertex_weights[j];
    if (w == 0.0) continue;
    os << (first ? " " : " + ") << w << " x" << j;
    first = false;
  }
  if (first) os << " 0 x0";
  os << "\nSubject To\n";
  for (int ei = 0; ei < h.num_edges(); ++ei) {
    os << " e" << ei << ":";
    bool f2 = true;
    for (int v : h.edges[ei].vertices) {
      os << (f2 ? " " : " + ") << "x" << v;
      f2 = false;
    }
    os << " <= " << h.edges[ei].capacity << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < h.num_vertices(); ++j) os << " 0 <= x" << j << " <= 1\n";
  os << "End\n";
  return os.str();
}

}  // namespace geopack
