#pragma once

#include <cstddef>
#include <string>
#include <vector>

// Dense joint-PMF tensors over products of finite alphabets, subset-marginal
// constraint systems, and the entropy functionals built on them.
// All entropies and divergences are in bits (log base 2).

namespace subsetcov {

inline constexpr double kMassTolerance = 1e-12;        // construction: |sum - 1|
inline constexpr double kConsistencyTolerance = 1e-9;  // cross-constraint agreement
inline constexpr int kMaxVariables = 8;                // desk scale
inline constexpr int kMaxAlphabet = 8;
inline constexpr std::size_t kMaxCells = 4096;

struct Alphabet {
  std::vector<int> sizes;  // |X_i| per variable, row-major axis order

  int num_variables() const { return static_cast<int>(sizes.size()); }
  std::size_t num_cells() const;
  std::size_t rank(const std::vector<int>& x) const;  // row-major cell index
  std::vector<int> unrank(std::size_t r) const;
  bool operator==(const Alphabet& o) const { return sizes == o.sizes; }
};

// Validates desk-scale bounds (1..8 variables, sizes 1..8, <= 4096 cells).
Alphabet make_alphabet(std::vector<int> sizes);

struct JointPMF {
  Alphabet alphabet;
  std::vector<double> probs;  // row-major, sums to 1 within kMassTolerance
};

// Validates shape, nonnegativity and total mass; with normalize=true rescales
// first (used by loaders), otherwise the given values must already satisfy the
// mass invariant.
JointPMF make_joint(Alphabet a, std::vector<double> probs, bool normalize = false);
JointPMF uniform_joint(Alphabet a);

struct SubsetConstraint {
  std::vector<int> subset;  // strictly increasing variable indices (the set S_j)
  JointPMF target;          // over exactly those variables, in subset order
};

struct ConstraintSystem {
  Alphabet alphabet;
  std::vector<JointPMF> marginals;  // one single-variable PMF per variable
  std::vector<SubsetConstraint> constraints;
};

// Validates index ranges/ordering and alphabet agreement between subsets,
// targets and marginals. Numeric consistency is check_consistency's job.
ConstraintSystem make_constraint_system(Alphabet a,
                                        std::vector<JointPMF> marginals,
                                        std::vector<SubsetConstraint> constraints);

// Convenience: derive the stored marginals from a full joint and a subset list.
ConstraintSystem system_from_joint(const JointPMF& joint,
                                   const std::vector<std::vector<int>>& subsets);

JointPMF marginalize(const JointPMF& p, const std::vector<int>& subset);
double entropy_bits(const JointPMF& p);
double conditional_entropy_bits(const JointPMF& p, const std::vector<int>& targets,
                                const std::vector<int>& given);
// +infinity sentinel when p's support exceeds q's.
double kl_divergence_bits(const JointPMF& p, const JointPMF& q);
JointPMF product_of_marginals(const ConstraintSystem& cs);
double binary_entropy(double p);

struct ConsistencyViolation {
  int constraint_a = -1;         // index into cs.constraints
  int constraint_b = -1;         // second constraint, or -1 for a stored marginal
  std::vector<int> intersection; // variables the two disagree on
  double deviation = 0.0;        // max entrywise gap
};

struct ConsistencyReport {
  bool ok = true;
  std::vector<ConsistencyViolation> violations;
};

ConsistencyReport check_consistency(const ConstraintSystem& cs);

}  // namespace subsetcov
