#pragma once

#include <cstdint>
#include <vector>

#include "subsetcov/pmf.hpp"
#include "subsetcov/regions.hpp"

// Random-coding laboratory: codebook generation (independent or superimposed),
// subset-typicality testing, covering search, covering-probability estimation,
// and the typicality-exponent probe (exact type counting or Monte Carlo).

namespace subsetcov {

inline constexpr std::uint64_t kDefaultTupleCap = 1ull << 26;

struct TypicalityParams {
  int n = 1;            // block length
  double epsilon = 0.1; // per-cell slack, 0 < epsilon < 1
};

// Strong typicality with additive per-cell slack: for every constraint S_j,
// |pi(a) - P(a)| <= epsilon for all cells a of the S_j-marginal, and
// pi(a) = 0 wherever P(a) = 0.
bool is_subset_typical(const std::vector<std::vector<int>>& seqs,
                       const ConstraintSystem& cs, const TypicalityParams& tp);

struct ParentSpec {
  int variable = 0;
  std::vector<int> parents;  // A_i; {variable} ∪ parents must sit inside some S_j
};
using SuperpositionMap = std::vector<ParentSpec>;  // empty = all independent

struct Codebook {
  int variable = 0;
  double rate_bits = 0.0;
  int n = 0;
  std::vector<int> parents;
  std::uint64_t seed = 0;
  std::uint64_t entries = 1;        // 2^ceil(n * rate_bits)
  std::uint64_t parent_blocks = 1;  // product of parent entry counts
  std::vector<std::uint8_t> symbols;  // [parent_block][entry][position]

  const std::uint8_t* entry(std::uint64_t parent_rank, std::uint64_t m) const {
    return symbols.data() + (parent_rank * entries + m) * static_cast<std::uint64_t>(n);
  }
};

// Unconditional entries are iid per the stored marginal P_i; with parents the
// entries for each parent codeword tuple are iid per P(X_i | {X}_{A_i})
// derived from a constraint containing {i} ∪ A_i (argument error when no such
// constraint exists). Deterministic given master_seed; entry m depends only on
// (master_seed, variable, parent block, m), so larger codebooks extend smaller
// ones entry-for-entry.
std::vector<Codebook> generate_codebooks(const ConstraintSystem& cs,
                                         const RatePoint& rates,
                                         const TypicalityParams& tp,
                                         const SuperpositionMap& superposition,
                                         std::uint64_t master_seed);

struct CoverOutcome {
  bool found = false;
  std::vector<std::uint64_t> indices;  // codeword tuple when found
  std::uint64_t searched = 0;
};

// Lexicographic scan (last variable fastest) with early exit; refuses when the
// index product exceeds the cap.
CoverOutcome covering_search(const std::vector<Codebook>& books,
                             const ConstraintSystem& cs, const TypicalityParams& tp,
                             std::uint64_t tuple_cap = kDefaultTupleCap);

struct CoverReport {
  int trials = 0;
  int successes = 0;
  double success_fraction = 0.0;
  double searched_tuples_mean = 0.0;
  double wilson_low = 0.0, wilson_high = 1.0;  // 95% interval
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> per_trial_found;   // 0/1 per trial, for monotonicity checks
};

CoverReport estimate_cover_prob(const ConstraintSystem& cs, const RatePoint& rates,
                                const TypicalityParams& tp, int trials,
                                std::uint64_t master_seed,
                                const SuperpositionMap& superposition = {},
                                std::uint64_t tuple_cap = kDefaultTupleCap);

enum class ExponentMode { exact, montecarlo };

struct ExponentOptions {
  int n_min = 1;
  int n_max = 1;
  double epsilon = 0.1;
  ExponentMode mode = ExponentMode::exact;
  std::uint64_t budget = 10000;                // Monte Carlo trials per n (>= 1e4)
  std::uint64_t space_cap = kDefaultTupleCap;  // exact mode refuses above this
  std::uint64_t seed = 0;
  SuperpositionMap superposition;  // Monte Carlo generation measure; empty = product
};

struct ExponentRow {
  int n = 0;
  // exact: log2(count)/n (reference H(P*));
  // montecarlo: -log2(success fraction)/n (reference sum H(X_i|A_i) - H(P*)).
  double exponent = 0.0;
  double reference = 0.0;
  double raw = 0.0;  // exact: typical-tuple count; montecarlo: success fraction
};

// Exact mode counts subset-typical tuples by exact type-class enumeration
// (identical to full tuple enumeration: typicality depends only on the joint
// type, and each type holds a multinomial number of tuples).
std::vector<ExponentRow> exponent_probe(const ConstraintSystem& cs,
                                        const ExponentOptions& opts);

}  // namespace subsetcov
