#include "subsetcov/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subsetcov {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void validate_subset(const std::vector<int>& subset, int n) {
  require(!subset.empty(), "subset must be nonempty");
  for (std::size_t k = 0; k < subset.size(); ++k) {
    require(subset[k] >= 0 && subset[k] < n, "subset index out of range");
    if (k > 0) require(subset[k] > subset[k - 1], "subset indices must be strictly increasing");
  }
}

}  // namespace

std::size_t Alphabet::num_cells() const {
  std::size_t n = 1;
  for (int s : sizes) n *= static_cast<std::size_t>(s);
  return n;
}

std::size_t Alphabet::rank(const std::vector<int>& x) const {
  std::size_t r = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) r = r * sizes[k] + x[k];
  return r;
}

std::vector<int> Alphabet::unrank(std::size_t r) const {
  std::vector<int> x(sizes.size());
  for (std::size_t k = sizes.size(); k-- > 0;) {
    x[k] = static_cast<int>(r % sizes[k]);
    r /= sizes[k];
  }
  return x;
}

Alphabet make_alphabet(std::vector<int> sizes) {
  require(!sizes.empty() && static_cast<int>(sizes.size()) <= kMaxVariables,
          "variable count must be 1..8");
  std::size_t cells = 1;
  for (int s : sizes) {
    require(s >= 1 && s <= kMaxAlphabet, "alphabet size must be 1..8");
    cells *= static_cast<std::size_t>(s);
    require(cells <= kMaxCells, "joint tensor exceeds 4096 cells");
  }
  return Alphabet{std::move(sizes)};
}

JointPMF make_joint(Alphabet a, std::vector<double> probs, bool normalize) {
  require(probs.size() == a.num_cells(), "probs length must match the product alphabet");
  double total = 0.0;
  for (double v : probs) {
    require(v >= -kMassTolerance, "probability entries must be nonnegative");
    total += v;
  }
  if (normalize) {
    require(total > 0.0, "cannot normalize a zero tensor");
    for (auto& v : probs) v /= total;
    total = 1.0;
  }
  require(std::abs(total - 1.0) <= kMassTolerance, "probabilities must sum to 1 within 1e-12");
  for (auto& v : probs)
    if (v < 0.0) v = 0.0;  // clip the tolerated dust
  return JointPMF{std::move(a), std::move(probs)};
}

JointPMF uniform_joint(Alphabet a) {
  std::size_t n = a.num_cells();
  return JointPMF{std::move(a), std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

ConstraintSystem make_constraint_system(Alphabet a, std::vector<JointPMF> marginals,
                                        std::vector<SubsetConstraint> constraints) {
  int n = a.num_variables();
  require(static_cast<int>(marginals.size()) == n, "need one marginal per variable");
  for (int v = 0; v < n; ++v) {
    require(marginals[v].alphabet.sizes == std::vector<int>{a.sizes[v]},
            "marginal alphabet mismatch");
  }
  for (const auto& con : constraints) {
    validate_subset(con.subset, n);
    std::vector<int> expect;
    for (int v : con.subset) expect.push_back(a.sizes[v]);
    require(con.target.alphabet.sizes == expect, "constraint target alphabet mismatch");
  }
  return ConstraintSystem{std::move(a), std::move(marginals), std::move(constraints)};
}

ConstraintSystem system_from_joint(const JointPMF& joint,
                                   const std::vector<std::vector<int>>& subsets) {
  std::vector<JointPMF> marg;
  for (int v = 0; v < joint.alphabet.num_variables(); ++v)
    marg.push_back(marginalize(joint, {v}));
  std::vector<SubsetConstraint> cons;
  for (const auto& sub : subsets) cons.push_back({sub, marginalize(joint, sub)});
  return make_constraint_system(joint.alphabet, std::move(marg), std::move(cons));
}

JointPMF marginalize(const JointPMF& p, const std::vector<int>& subset) {
  const Alphabet& a = p.alphabet;
  validate_subset(subset, a.num_variables());
  std::vector<int> sub_sizes;
  for (int v : subset) sub_sizes.push_back(a.sizes[v]);
  Alphabet sa{sub_sizes};
  std::vector<double> out(sa.num_cells(), 0.0);
  std::vector<int> x(a.sizes.size(), 0);
  for (std::size_t r = 0; r < p.probs.size(); ++r) {
    std::size_t sr = 0;
    for (std::size_t k = 0; k < subset.size(); ++k)
      sr = sr * sub_sizes[k] + x[subset[k]];
    out[sr] += p.probs[r];
    for (std::size_t k = a.sizes.size(); k-- > 0;) {
      if (++x[k] < a.sizes[k]) break;
      x[k] = 0;
    }
  }
  return JointPMF{std::move(sa), std::move(out)};
}

double entropy_bits(const JointPMF& p) {
  double h = 0.0;
  for (double v : p.probs)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double conditional_entropy_bits(const JointPMF& p, const std::vector<int>& targets,
                                const std::vector<int>& given) {
  for (int t : targets)
    for (int g : given)
      require(t != g, "targets and given must be disjoint");
  std::vector<int> both = targets;
  both.insert(both.end(), given.begin(), given.end());
  std::sort(both.begin(), both.end());
  double h_both = entropy_bits(marginalize(p, both));
  if (given.empty()) return h_both;
  std::vector<int> g = given;
  std::sort(g.begin(), g.end());
  return h_both - entropy_bits(marginalize(p, g));
}

double kl_divergence_bits(const JointPMF& p, const JointPMF& q) {
  require(p.alphabet == q.alphabet, "kl divergence needs a common alphabet");
  double d = 0.0;
  for (std::size_t i = 0; i < p.probs.size(); ++i) {
    if (p.probs[i] <= 0.0) continue;
    if (q.probs[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p.probs[i] * std::log2(p.probs[i] / q.probs[i]);
  }
  return d < 0.0 ? 0.0 : d;  // clamp accumulation dust
}

JointPMF product_of_marginals(const ConstraintSystem& cs) {
  const Alphabet& a = cs.alphabet;
  std::vector<double> out(a.num_cells(), 1.0);
  std::vector<int> x(a.sizes.size(), 0);
  for (std::size_t r = 0; r < out.size(); ++r) {
    for (std::size_t v = 0; v < a.sizes.size(); ++v) out[r] *= cs.marginals[v].probs[x[v]];
    for (std::size_t k = a.sizes.size(); k-- > 0;) {
      if (++x[k] < a.sizes[k]) break;
      x[k] = 0;
    }
  }
  return make_joint(a, std::move(out), true);
}

double binary_entropy(double p) {
  require(p >= 0.0 && p <= 1.0, "binary_entropy needs p in [0,1]");
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

namespace {

// Marginal of a constraint target onto a sub-list of its own variables.
std::vector<double> target_marginal(const SubsetConstraint& con, const std::vector<int>& vars) {
  std::vector<int> pos;
  for (int v : vars)
    pos.push_back(static_cast<int>(std::lower_bound(con.subset.begin(), con.subset.end(), v) -
                                   con.subset.begin()));
  return marginalize(con.target, pos).probs;
}

}  // namespace

ConsistencyReport check_consistency(const ConstraintSystem& cs) {
  ConsistencyReport rep;
  auto record = [&rep](int a, int b, std::vector<int> inter, double dev) {
    if (dev > kConsistencyTolerance) {
      rep.ok = false;
      rep.violations.push_back({a, b, std::move(inter), dev});
    }
  };
  int m = static_cast<int>(cs.constraints.size());
  // against stored single-variable marginals
  for (int j = 0; j < m; ++j) {
    for (int v : cs.constraints[j].subset) {
      auto implied = target_marginal(cs.constraints[j], {v});
      double dev = 0.0;
      for (std::size_t i = 0; i < implied.size(); ++i)
        dev = std::max(dev, std::abs(implied[i] - cs.marginals[v].probs[i]));
      record(j, -1, {v}, dev);
    }
  }
  // pairwise intersections
  for (int j = 0; j < m; ++j) {
    for (int k = j + 1; k < m; ++k) {
      std::vector<int> inter;
      std::set_intersection(cs.constraints[j].subset.begin(), cs.constraints[j].subset.end(),
                            cs.constraints[k].subset.begin(), cs.constraints[k].subset.end(),
                            std::back_inserter(inter));
      if (inter.empty()) continue;
      auto mj = target_marginal(cs.constraints[j], inter);
      auto mk = target_marginal(cs.constraints[k], inter);
      double dev = 0.0;
      for (std::size_t i = 0; i < mj.size(); ++i)
        dev = std::max(dev, std::abs(mj[i] - mk[i]));
      record(j, k, std::move(inter), dev);
    }
  }
  return rep;
}

}  // namespace subsetcov
