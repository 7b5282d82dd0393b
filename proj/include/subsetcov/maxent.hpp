#pragma once

#include <cstddef>
#include <vector>

#include "subsetcov/pmf.hpp"

// Maximum-entropy joint distributions under subset-marginal constraints:
// iterative proportional fitting (the I-projection of uniform onto the
// constraint polytope) with an LP-computed maximal-support face, the
// conditional variant used by the Gray-Wyner region, and LP feasibility
// certificates.

namespace subsetcov {

struct MaxentOptions {
  int max_iterations = 10000;        // full IPF sweeps
  double residual_tolerance = 1e-10; // max absolute constraint-marginal deviation
  double entropy_tolerance = 1e-9;   // bits; stop when a sweep moves H less than this
  bool restrict_support = true;      // precompute the maximal-support face by LP
  double support_tolerance = 1e-9;   // cell counts as attainable above this
};

enum class MaxentStatus { converged, iteration_limit, infeasible_detected };

struct MaxentResult {
  MaxentStatus status = MaxentStatus::iteration_limit;
  JointPMF distribution;
  double entropy_bits = 0.0;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;  // max deviation after each full sweep
  std::vector<std::size_t> support;      // cells of the maximal-support face
};

// Requires check_consistency(cs).ok (argument error otherwise). Never infers
// infeasibility from slow convergence; infeasible-detected comes only from the
// support LP.
MaxentResult maxent(const ConstraintSystem& cs, const MaxentOptions& opts = {});

// I-projection of an explicit starting point onto the constraint polytope:
// the same IPF sweeps as maxent but from `init` (zero cells stay zero, no
// support precomputation). Used by the feasible-sample generator.
MaxentResult ipf_project(const ConstraintSystem& cs, const JointPMF& init,
                         const MaxentOptions& opts = {});

// cs_joint spans the variables u_vars ++ x_vars and must contain a constraint
// pinning the full joint over x_vars. entropy_bits reports
// H(maximizer) - H(X), i.e. the maximized conditional entropy H(U|X).
MaxentResult conditional_maxent(const ConstraintSystem& cs_joint,
                                const std::vector<int>& u_vars,
                                const std::vector<int>& x_vars,
                                const MaxentOptions& opts = {});

struct FeasibilityCertificate {
  bool feasible = false;
  JointPMF witness;               // valid when feasible; satisfies rows within 1e-9
  double max_residual = 0.0;      // witness constraint deviation
  double phase1_objective = 0.0;  // > tolerance when infeasible
  std::vector<int> basis;         // certifying basis (phase-1 final)
};

FeasibilityCertificate feasibility(const ConstraintSystem& cs,
                                   double pivot_tol = 1e-10);

// Equality rows of the constraint polytope: one row per constrained marginal
// cell plus the total-mass row. Shared by feasibility, the support probe, the
// membership solver's LP oracle and the zero-rate certificate.
struct PolytopeRows {
  std::vector<std::vector<double>> A;
  std::vector<double> b;
};
PolytopeRows constraint_rows(const ConstraintSystem& cs);

// Maximal-support face: cells attainable with positive mass by some feasible
// point. The maxent distribution is strictly positive exactly there. Empty
// result with feasible=false when the polytope is empty.
struct SupportFace {
  bool feasible = false;
  std::vector<std::size_t> cells;
};
SupportFace support_face(const ConstraintSystem& cs, double tol = 1e-9);

}  // namespace subsetcov
