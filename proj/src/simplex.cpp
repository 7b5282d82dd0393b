#include "subsetcov/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

// Dense two-phase tableau simplex. Phase 1 minimizes the sum of artificial
// variables (one per row after sign normalization); phase 2 maximizes c.x from
// the feasible basis with artificial columns barred from re-entering. Bland's
// rule (lowest eligible index for entering and leaving) prevents cycling on
// the highly degenerate marginal polytopes this project produces.

namespace subsetcov {

namespace {

struct Tableau {
  int m = 0;                         // rows
  int n = 0;                         // structural columns
  int width = 0;                     // structural + artificial + rhs
  std::vector<std::vector<double>> t;  // m rows of width, plus objective row
  std::vector<int> basis;            // basic column per row
  double tol = kPivotTolerance;

  double& at(int i, int j) { return t[i][j]; }
  int rhs() const { return width - 1; }

  void pivot(int pr, int pc) {
    double piv = t[pr][pc];
    for (int j = 0; j < width; ++j) t[pr][j] /= piv;
    for (int i = 0; i <= m; ++i) {
      if (i == pr) continue;
      double f = t[i][pc];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) t[i][j] -= f * t[pr][j];
    }
    basis[pr] = pc;
  }

  // Bland: entering = lowest column with positive reduced profit; leaving =
  // min-ratio row, ties broken by lowest basis column. allowed(j) gates entry.
  // Returns false when optimal; throws on unbounded.
  template <typename Allowed>
  bool step(const Allowed& allowed) {
    int pc = -1;
    for (int j = 0; j < width - 1; ++j) {
      if (!allowed(j)) continue;
      if (t[m][j] > tol) {
        pc = j;
        break;
      }
    }
    if (pc < 0) return false;
    int pr = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (t[i][pc] > tol) {
        double ratio = t[i][rhs()] / t[i][pc];
        if (ratio < best - 1e-15 ||
            (ratio < best + 1e-15 && (pr < 0 || basis[i] < basis[pr]))) {
          best = ratio;
          pr = i;
        }
      }
    }
    if (pr < 0) throw std::runtime_error("lp unbounded");
    pivot(pr, pc);
    return true;
  }
};

}  // namespace

LPResult solve_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                  const std::vector<double>& c, double pivot_tol) {
  int m = static_cast<int>(A.size());
  int n = m > 0 ? static_cast<int>(A[0].size()) : static_cast<int>(c.size());
  if (!c.empty() && static_cast<int>(c.size()) != n)
    throw std::invalid_argument("objective length mismatch");

  Tableau tb;
  tb.m = m;
  tb.n = n;
  tb.width = n + m + 1;
  tb.tol = pivot_tol;
  tb.t.assign(m + 1, std::vector<double>(tb.width, 0.0));
  tb.basis.resize(m);

  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(A[i].size()) != n) throw std::invalid_argument("ragged row");
    double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) tb.t[i][j] = sign * A[i][j];
    tb.t[i][n + i] = 1.0;  // artificial
    tb.t[i][tb.rhs()] = sign * b[i];
    tb.basis[i] = n + i;
  }

  // Phase-1 objective: maximize -(sum of artificials); expressed through the
  // basic rows so reduced costs start correct.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < tb.width; ++j) tb.t[m][j] += tb.t[i][j];
  for (int i = 0; i < m; ++i) tb.t[m][n + i] = 0.0;

  auto structural_only = [n](int j) { return j < n; };
  while (tb.step(structural_only)) {
  }

  LPResult out;
  out.phase1_objective = tb.t[m][tb.rhs()];
  if (out.phase1_objective > 1e-8) {
    out.status = LPStatus::infeasible;
    out.basis = tb.basis;
    return out;
  }

  // Drive remaining artificial basics out where a structural pivot exists;
  // rows stuck on an artificial at zero are redundant and stay inert.
  for (int i = 0; i < m; ++i) {
    if (tb.basis[i] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tb.t[i][j]) > pivot_tol) {
        tb.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2.
  for (int j = 0; j < tb.width; ++j) tb.t[m][j] = 0.0;
  if (!c.empty()) {
    for (int j = 0; j < n; ++j) tb.t[m][j] = c[j];
    for (int i = 0; i < m; ++i) {
      int bj = tb.basis[i];
      if (bj < n && c[bj] != 0.0) {
        double f = c[bj];
        for (int j = 0; j < tb.width; ++j) tb.t[m][j] -= f * tb.t[i][j];
      }
    }
    try {
      while (tb.step(structural_only)) {
      }
    } catch (const std::runtime_error&) {
      out.status = LPStatus::unbounded;
      out.basis = tb.basis;
      return out;
    }
  }

  out.status = LPStatus::optimal;
  out.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (tb.basis[i] < n) out.x[tb.basis[i]] = tb.t[i][tb.rhs()];
  for (auto& v : out.x)
    if (v < 0.0 && v > -1e-11) v = 0.0;
  out.objective = 0.0;
  for (int j = 0; j < n && !c.empty(); ++j) out.objective += c[j] * out.x[j];
  out.basis = tb.basis;
  return out;
}

}  // namespace subsetcov
