#include "subsetcov/gray_wyner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subsetcov {

namespace {

// Auxiliary sets reaching each sink: S_1 = {U123,U12,U13}, S_2 = {U123,U12,U23},
// S_3 = {U123,U13,U23}.
const std::vector<std::vector<int>> kSinkSets = {
    {kU123, kU12, kU13}, {kU123, kU12, kU23}, {kU123, kU13, kU23}};
const int kSinkSource[] = {kX1, kX2, kX3};

std::string u_label(int v) {
  switch (v) {
    case kU123: return "U123";
    case kU12: return "U12";
    case kU13: return "U13";
    default: return "U23";
  }
}

// Conditional maximum entropy H*({U}_J | X): the largest H(U_J | X) over
// joints that agree with the instance on ({U}_{J ∩ S_j}, X_j) for every sink j
// and on the full X triple.
double hstar_term(const GWInstance& inst, const std::vector<int>& j_u,
                  const std::string& label, const MaxentOptions& opts) {
  const Alphabet& a = inst.joint.alphabet;
  std::vector<int> vars = j_u;  // sorted U subset, then the three sources
  vars.insert(vars.end(), {kX1, kX2, kX3});

  auto local = [&](const std::vector<int>& global) {
    std::vector<int> out;
    for (int g : global) {
      auto it = std::lower_bound(vars.begin(), vars.end(), g);
      out.push_back(static_cast<int>(it - vars.begin()));
    }
    return out;
  };

  std::vector<int> sizes;
  for (int v : vars) sizes.push_back(a.sizes[v]);
  std::vector<JointPMF> marginals;
  for (int v : vars) marginals.push_back(marginalize(inst.joint, {v}));

  std::vector<SubsetConstraint> cons;
  for (int j = 0; j < 3; ++j) {
    std::vector<int> glob;
    for (int u : j_u)
      if (std::find(kSinkSets[j].begin(), kSinkSets[j].end(), u) != kSinkSets[j].end())
        glob.push_back(u);
    glob.push_back(kSinkSource[j]);
    std::sort(glob.begin(), glob.end());
    cons.push_back({local(glob), marginalize(inst.joint, glob)});
  }
  cons.push_back({local({kX1, kX2, kX3}), marginalize(inst.joint, {kX1, kX2, kX3})});

  ConstraintSystem sys =
      make_constraint_system(make_alphabet(sizes), std::move(marginals), std::move(cons));
  MaxentResult res = conditional_maxent(sys, local(j_u), local({kX1, kX2, kX3}), opts);
  if (res.status != MaxentStatus::converged)
    throw std::runtime_error("gray-wyner: conditional maximum entropy failed for " + label);
  return res.entropy_bits;
}

}  // namespace

GWInstance make_gw_instance(JointPMF seven_var_joint) {
  if (seven_var_joint.alphabet.num_variables() != 7)
    throw std::invalid_argument(
        "gray-wyner: the instance joint must cover (U123,U12,U13,U23,X1,X2,X3)");
  return GWInstance{std::move(seven_var_joint)};
}

GWEvaluation evaluate_gw_region(const GWInstance& inst, const MaxentOptions& opts) {
  const JointPMF& p = inst.joint;
  GWEvaluation ev;

  double h_common = entropy_bits(marginalize(p, {kU123}));
  auto pair_entropy = [&](int b) { return entropy_bits(marginalize(p, {kU123, b})); };
  auto branch_given = [&](int b) { return pair_entropy(b) - h_common; };

  auto emit = [&](std::string label, std::uint32_t mask, double bound) {
    ev.region.bounds.push_back({std::move(label), mask, bound});
  };
  auto hstar = [&](std::vector<int> j_u, const std::string& label) {
    double h = hstar_term(inst, j_u, label, opts);
    ev.hstar_terms.push_back(h);
    return h;
  };

  const std::uint32_t m123 = 1u << kR123;
  const int branch_rate[] = {0, kR12, kR13, kR23};  // indexed by U constant

  emit("R123", m123, h_common - hstar({kU123}, "R123"));

  for (int b : {kU12, kU13, kU23}) {
    std::string label = "R123+R" + u_label(b).substr(1);
    emit(label, m123 | 1u << branch_rate[b],
         pair_entropy(b) - hstar({kU123, b}, label));
  }

  const std::vector<std::pair<int, int>> sink_branches = {
      {kU12, kU13}, {kU12, kU23}, {kU13, kU23}};
  for (const auto& [b1, b2] : sink_branches) {
    std::string label = "R123+R" + u_label(b1).substr(1) + "+R" + u_label(b2).substr(1);
    emit(label, m123 | 1u << branch_rate[b1] | 1u << branch_rate[b2],
         h_common + branch_given(b1) + branch_given(b2) -
             hstar({kU123, b1, b2}, label));
  }

  {
    std::string label = "R123+R12+R13+R23";
    emit(label, m123 | 1u << kR12 | 1u << kR13 | 1u << kR23,
         h_common + branch_given(kU12) + branch_given(kU13) + branch_given(kU23) -
             hstar({kU123, kU12, kU13, kU23}, label));
  }

  for (int i = 0; i < 3; ++i)
    emit("R" + std::to_string(i + 1), 1u << i,
         conditional_entropy_bits(p, {kSinkSource[i]}, kSinkSets[static_cast<std::size_t>(i)]));

  return ev;
}

GWCheck gw_point_check(const GWRegion& region, const GWRates& rates, double tol) {
  for (double r : rates)
    if (!(r >= 0.0) || !std::isfinite(r))
      throw std::invalid_argument("gray-wyner: rates must be nonnegative reals");
  GWCheck check;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : region.bounds) {
    double sum = 0.0;
    for (int k = 0; k < kNumGWRates; ++k)
      if (b.rate_mask >> k & 1u) sum += rates[static_cast<std::size_t>(k)];
    double slack = sum - b.bound_bits;
    if (slack < best) {
      best = slack;
      check.argmin_label = b.label;
    }
  }
  check.margin = best;
  check.inside = best >= -tol;
  return check;
}

}  // namespace subsetcov
