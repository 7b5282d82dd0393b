#pragma once

#include <vector>

// Dense two-phase simplex with Bland's rule for the small equality-form
// programs this project needs (feasibility certificates, maximal-support
// probing, and the linear-minimization oracle of the membership solver).

namespace subsetcov {

inline constexpr double kPivotTolerance = 1e-10;

enum class LPStatus { optimal, infeasible, unbounded };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  double objective = 0.0;         // c.x at the optimum (maximization)
  std::vector<double> x;          // primal solution (size = #columns)
  std::vector<int> basis;         // basic column per row (phase-2, or final phase-1)
  double phase1_objective = 0.0;  // residual infeasibility (0 when feasible)
};

// maximize c.x  subject to  A x = b, x >= 0.
// A is row-major dense; b may have any signs (rows are flipped internally).
// With empty c only phase 1 runs (pure feasibility).
LPResult solve_lp(const std::vector<std::vector<double>>& A,
                  const std::vector<double>& b,
                  const std::vector<double>& c,
                  double pivot_tol = kPivotTolerance);

}  // namespace subsetcov
