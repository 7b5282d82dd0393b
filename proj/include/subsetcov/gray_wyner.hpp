#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "subsetcov/maxent.hpp"
#include "subsetcov/pmf.hpp"

// Three-user lossless Gray-Wyner achievable region for a given source joint
// P(X_1,X_2,X_3) and test channel P(U_123,U_12,U_13,U_23 | X): the seven-rate
// inequality list whose H*-terms are conditional maximum entropies under the
// per-decoder pinning family S_1 = {U_123,U_12,U_13}, S_2 = {U_123,U_12,U_23},
// S_3 = {U_123,U_13,U_23} (each pinned jointly with its X_j, plus the full
// X-joint).

namespace subsetcov {

// Variable order of the seven-variable instance joint.
inline constexpr int kU123 = 0, kU12 = 1, kU13 = 2, kU23 = 3;
inline constexpr int kX1 = 4, kX2 = 5, kX3 = 6;

struct GWInstance {
  JointPMF joint;  // seven variables in the order above; X-marginal = source
};

// Validates shape and that the X-marginal is a proper source.
GWInstance make_gw_instance(JointPMF seven_var_joint);

// Rate order used in masks and reports.
enum GWRateIndex { kR1 = 0, kR2, kR3, kR12, kR13, kR23, kR123, kNumGWRates };

using GWRates = std::array<double, kNumGWRates>;

struct GWBound {
  std::string label;            // e.g. "R123+R12"
  std::uint32_t rate_mask = 0;  // bit set per GWRateIndex on the left-hand side
  double bound_bits = 0.0;
};

struct GWRegion {
  std::vector<GWBound> bounds;  // 11 labeled inequalities (see evaluate_gw_region)
};

// Emits the five bound families over all index patterns:
//   1 common bound        R123 >= H(U123) - H*(U123|X)
//   3 one-branch bounds   R123+Rij >= H(U123,Uij) - H*(U123,Uij|X)
//   3 two-branch bounds   R123+Rij+Rik >= H(U123) + H(Uij|U123) + H(Uik|U123)
//                                        - H*(U123,Uij,Uik|X)   (common user i)
//   1 all-branch bound    R123+R12+R13+R23 >= H(U123) + sum H(Uij|U123)
//                                        - H*(U123,U12,U13,U23|X)
//   3 private bounds      Ri >= H(Xi | {U}_{S_i})
struct GWEvaluation {
  GWRegion region;
  std::vector<double> hstar_terms;  // conditional maxent value per H*-bound, in emit order
};
GWEvaluation evaluate_gw_region(const GWInstance& inst, const MaxentOptions& opts = {});

struct GWCheck {
  bool inside = false;
  double margin = 0.0;  // min slack over bounds, bits
  std::string argmin_label;
};

GWCheck gw_point_check(const GWRegion& region, const GWRates& rates,
                       double tol = 1e-7);

}  // namespace subsetcov
