#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "subsetcov/maxent.hpp"
#include "subsetcov/pmf.hpp"

// Rate-region machinery: the subset-local maximum-entropy region (one bound
// per nonempty subset J, sum_{i in J} R_i >= sum H(X_i) - H*({X}_J)), the
// fixed-joint covering region, point membership for both, the Frank-Wolfe
// union-membership solver, and the zero-rate LP certificate.

namespace subsetcov {

using RatePoint = std::vector<double>;  // bits per symbol, one entry per variable

inline constexpr double kMembershipTolerance = 1e-7;

struct RateBound {
  std::uint32_t subset_mask = 0;  // bit i set => variable i in J
  double bound_bits = 0.0;        // c_J
};

struct InequalitySystem {
  int num_variables = 0;
  std::vector<RateBound> bounds;  // one per nonempty J, sorted by mask
};

// Subsystem induced on the (sorted) variables of J: marginals kept, each
// constraint intersected with J and its target marginalized down; empty
// intersections and duplicate subsets dropped.
ConstraintSystem restricted_system(const ConstraintSystem& cs, const std::vector<int>& vars);

// 2^N - 1 bounds with c_J = sum_{i in J} H(X_i) - H*({X}_J), each H* solved by
// maxent over the J-restricted system (constraints {S_j ∩ J : nonempty}).
// Throws when any restricted solve hits the iteration limit (names the subset).
InequalitySystem build_rstar(const ConstraintSystem& cs, const MaxentOptions& opts = {});

// 2^N - 1 bounds with c_J = sum_{i in J} H(X_i) - H(p_tilde_J); entropies of
// the given joint's own marginals.
InequalitySystem build_ra_fixed(const JointPMF& p_tilde);

enum class Verdict { inside, outside, boundary_indeterminate };

struct MembershipVerdict {
  Verdict status = Verdict::boundary_indeterminate;
  double margin = 0.0;            // min over J of slack, bits
  std::uint32_t argmin_mask = 0;  // subset attaining the margin
  std::optional<JointPMF> witness;
};

MembershipVerdict point_in_system(const RatePoint& r, const InequalitySystem& sys,
                                  double tol = kMembershipTolerance);

struct RaUnionOptions {
  std::vector<double> temperatures{1.0, 0.3, 0.1, 0.01, 1e-3};  // bits
  int iterations_per_stage = 200;
  double inside_tol = 1e-6;   // inside when achieved min-slack >= -inside_tol
  double outside_tol = 1e-4;  // outside when achieved min-slack <= -outside_tol
  MaxentOptions maxent;
};

struct RaUnionResult {
  MembershipVerdict verdict;
  // Soft-min objective per iteration, one series per temperature stage
  // (non-decreasing within a stage).
  std::vector<std::vector<double>> objective_history;
};

// Maximizes min_J g_J over the constraint polytope, g_J(p) =
// sum_{i in J} r_i - sum_{i in J} H(X_i) + H(p_J), by Frank-Wolfe on a
// log-sum-exp soft-min with annealed temperature; the LP oracle is one simplex
// solve per step. The verdict's witness is the best iterate.
RaUnionResult point_in_ra_union(const RatePoint& r, const ConstraintSystem& cs,
                                const RaUnionOptions& opts = {});

struct ZeroRateCertificate {
  bool feasible = false;
  JointPMF witness;               // valid when feasible
  double phase1_objective = 0.0;  // > tol when infeasible
  std::vector<int> basis;
};

// Feasibility of the constraint polytope with the added rows pinning the
// marginal over zero_set to the product of its stored marginals. INFEASIBLE
// proves no achievable tuple (union or its convex closure) has all-zero rates
// on zero_set.
ZeroRateCertificate zero_rate_certificate(const ConstraintSystem& cs,
                                          const std::vector<int>& zero_set);

struct SubsumptionReport {
  int samples = 0;
  double max_violation_bits = 0.0;  // max over samples and J of c*_J - c_J(p~)
  std::uint32_t worst_mask = 0;
};

// Samples feasible joints (randomized positive IPF initializations re-projected
// onto the polytope) and checks the bound-level inclusion c*_J <= c_J(p~).
SubsumptionReport subsumption_check(const ConstraintSystem& cs, int samples,
                                    std::uint64_t seed,
                                    const MaxentOptions& opts = {});

}  // namespace subsetcov
