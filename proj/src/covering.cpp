#include "subsetcov/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "subsetcov/maxent.hpp"
#include "subsetcov/rng.hpp"

namespace subsetcov {

namespace {

constexpr std::uint64_t kTrialStream = 0x636f766572747269ull;   // cover-trial seeds
constexpr std::uint64_t kProbeStream = 0x657870726f626531ull;   // monte-carlo probe

void validate_params(const TypicalityParams& tp) {
  if (tp.n < 1) throw std::invalid_argument("typicality: block length must be >= 1");
  if (!(tp.epsilon > 0.0) || !(tp.epsilon < 1.0))
    throw std::invalid_argument("typicality: slack must lie in (0, 1)");
}

// Reusable empirical-type checker: per-constraint cell maps are derived once,
// count buffers are reused across calls (the covering scan is the hot path).
class TypeChecker {
 public:
  TypeChecker(const ConstraintSystem& cs, const TypicalityParams& tp)
      : cs_(cs), n_(tp.n), epsilon_(tp.epsilon) {
    for (const auto& con : cs.constraints) {
      Item item;
      item.subset = con.subset;
      item.target = &con.target.probs;
      std::size_t cells = 1;
      for (int v : con.subset) cells *= static_cast<std::size_t>(cs.alphabet.sizes[v]);
      item.counts.assign(cells, 0);
      items_.push_back(std::move(item));
    }
  }

  bool typical(const std::vector<std::vector<int>>& seqs) {
    for (auto& item : items_) {
      std::fill(item.counts.begin(), item.counts.end(), 0);
      for (int t = 0; t < n_; ++t) {
        std::size_t r = 0;
        for (int v : item.subset)
          r = r * static_cast<std::size_t>(cs_.alphabet.sizes[v]) +
              static_cast<std::size_t>(seqs[static_cast<std::size_t>(v)][t]);
        ++item.counts[r];
      }
      if (!counts_typical(item)) return false;
    }
    return true;
  }

  // Same rule applied to aggregated cell counts of a full joint type.
  bool type_typical(const std::vector<int>& joint_counts,
                    const std::vector<std::vector<std::size_t>>& cell_of) {
    for (std::size_t j = 0; j < items_.size(); ++j) {
      auto& item = items_[j];
      std::fill(item.counts.begin(), item.counts.end(), 0);
      for (std::size_t c = 0; c < joint_counts.size(); ++c)
        item.counts[cell_of[j][c]] += joint_counts[c];
      if (!counts_typical(item)) return false;
    }
    return true;
  }

  std::vector<std::vector<std::size_t>> joint_cell_maps() const {
    std::vector<std::vector<std::size_t>> maps;
    for (const auto& item : items_) {
      std::vector<std::size_t> m(cs_.alphabet.num_cells());
      for (std::size_t c = 0; c < m.size(); ++c) {
        std::vector<int> x = cs_.alphabet.unrank(c);
        std::size_t r = 0;
        for (int v : item.subset)
          r = r * static_cast<std::size_t>(cs_.alphabet.sizes[v]) +
              static_cast<std::size_t>(x[static_cast<std::size_t>(v)]);
        m[c] = r;
      }
      maps.push_back(std::move(m));
    }
    return maps;
  }

 private:
  struct Item {
    std::vector<int> subset;
    const std::vector<double>* target = nullptr;
    std::vector<int> counts;
  };

  bool counts_typical(const Item& item) const {
    for (std::size_t c = 0; c < item.counts.size(); ++c) {
      double p = (*item.target)[c];
      if (p == 0.0) {
        if (item.counts[c] != 0) return false;
      } else {
        double pi = static_cast<double>(item.counts[c]) / n_;
        if (std::fabs(pi - p) > epsilon_ + 1e-12) return false;
      }
    }
    return true;
  }

  const ConstraintSystem& cs_;
  int n_;
  double epsilon_;
  std::vector<Item> items_;
};

// Joint law over sorted({i} ∪ parents) taken from the first constraint that
// contains it, plus the conditional table P(X_i | parent cell).
struct ConditionalLaw {
  std::vector<int> family;          // sorted, includes the child
  std::size_t child_pos = 0;        // index of the child inside family
  std::size_t parent_cells = 1;     // product of parent alphabet sizes
  int child_size = 0;
  std::vector<double> joint;        // fam joint, row-major in family order
  std::vector<double> table;        // [parent_cell][child_symbol]
};

ConditionalLaw derive_conditional(const ConstraintSystem& cs, int variable,
                                  const std::vector<int>& parents) {
  ConditionalLaw law;
  law.family = parents;
  law.family.push_back(variable);
  std::sort(law.family.begin(), law.family.end());
  for (std::size_t k = 0; k < law.family.size(); ++k)
    if (law.family[k] == variable) law.child_pos = k;

  const SubsetConstraint* found = nullptr;
  for (const auto& con : cs.constraints)
    if (std::includes(con.subset.begin(), con.subset.end(), law.family.begin(),
                      law.family.end())) {
      found = &con;
      break;
    }
  if (!found)
    throw std::invalid_argument(
        "superposition: no constraint contains the child together with its parents");

  std::vector<int> where;
  for (int v : law.family) {
    auto it = std::lower_bound(found->subset.begin(), found->subset.end(), v);
    where.push_back(static_cast<int>(it - found->subset.begin()));
  }
  JointPMF q = marginalize(found->target, where);
  law.joint = q.probs;
  law.child_size = cs.alphabet.sizes[variable];
  for (int v : parents) law.parent_cells *= static_cast<std::size_t>(cs.alphabet.sizes[v]);

  // Row-major family cell given (parent cell, child symbol); the parent cell
  // runs over the *sorted* parent list.
  std::vector<int> fam_sizes;
  for (int v : law.family) fam_sizes.push_back(cs.alphabet.sizes[v]);
  law.table.assign(law.parent_cells * static_cast<std::size_t>(law.child_size), 0.0);
  std::vector<int> sorted_parents = law.family;
  sorted_parents.erase(sorted_parents.begin() + static_cast<std::ptrdiff_t>(law.child_pos));
  for (std::size_t pc = 0; pc < law.parent_cells; ++pc) {
    // decode parent symbols (row-major over sorted parents)
    std::vector<int> psym(sorted_parents.size(), 0);
    std::size_t rest = pc;
    for (std::size_t k = sorted_parents.size(); k-- > 0;) {
      int sz = cs.alphabet.sizes[sorted_parents[k]];
      psym[k] = static_cast<int>(rest % static_cast<std::size_t>(sz));
      rest /= static_cast<std::size_t>(sz);
    }
    double total = 0.0;
    std::vector<double> row(static_cast<std::size_t>(law.child_size), 0.0);
    for (int s = 0; s < law.child_size; ++s) {
      std::size_t r = 0;
      std::size_t pk = 0;
      for (std::size_t k = 0; k < law.family.size(); ++k) {
        int sym = k == law.child_pos ? s : psym[pk++];
        r = r * static_cast<std::size_t>(fam_sizes[k]) + static_cast<std::size_t>(sym);
      }
      row[static_cast<std::size_t>(s)] = law.joint[r];
      total += law.joint[r];
    }
    for (int s = 0; s < law.child_size; ++s)
      law.table[pc * static_cast<std::size_t>(law.child_size) + s] =
          total > 0.0 ? row[static_cast<std::size_t>(s)] / total
                      : 1.0 / law.child_size;  // unreachable parent context
  }
  return law;
}

// Validated parent lists per variable (sorted), restricted to one level:
// every parent must itself be unconditional so a parent block index always
// identifies the parent codeword tuple.
std::vector<std::vector<int>> parent_lists(const ConstraintSystem& cs,
                                           const SuperpositionMap& superposition) {
  const int n_vars = cs.alphabet.num_variables();
  std::vector<std::vector<int>> parents(static_cast<std::size_t>(n_vars));
  std::vector<bool> has_spec(static_cast<std::size_t>(n_vars), false);
  for (const auto& spec : superposition) {
    if (spec.variable < 0 || spec.variable >= n_vars)
      throw std::invalid_argument("superposition: variable index out of range");
    if (has_spec[static_cast<std::size_t>(spec.variable)])
      throw std::invalid_argument("superposition: duplicate entry for a variable");
    has_spec[static_cast<std::size_t>(spec.variable)] = true;
    std::vector<int> ps = spec.parents;
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    for (int p : ps) {
      if (p < 0 || p >= n_vars)
        throw std::invalid_argument("superposition: parent index out of range");
      if (p == spec.variable)
        throw std::invalid_argument("superposition: a variable cannot parent itself");
    }
    parents[static_cast<std::size_t>(spec.variable)] = std::move(ps);
  }
  for (int v = 0; v < n_vars; ++v)
    for (int p : parents[static_cast<std::size_t>(v)])
      if (!parents[static_cast<std::size_t>(p)].empty())
        throw std::invalid_argument(
            "superposition: parents must be unconditional (one-level maps only)");
  return parents;
}

std::uint64_t entries_for_rate(double rate, int n) {
  if (!(rate >= 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("codebooks: rates must be nonnegative reals");
  double bits = std::ceil(static_cast<double>(n) * rate - 1e-9);
  if (bits < 0.0) bits = 0.0;
  if (bits > 40.0) throw std::length_error("codebooks: entry count above 2^40");
  return 1ull << static_cast<std::uint64_t>(bits);
}

double plain_entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double v : probs)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// Exact multinomial coefficient n! / prod(counts!), as a product of binomials.
std::uint64_t multinomial(int n, const std::vector<int>& counts) {
  unsigned __int128 result = 1;
  int used = 0;
  for (int c : counts) {
    // result *= C(used + c, c), built factor-by-factor (each prefix integral)
    for (int k = 1; k <= c; ++k) {
      result = result * static_cast<unsigned>(used + k);
      result = result / static_cast<unsigned>(k);
    }
    used += c;
  }
  (void)n;
  if (result > static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max()))
    throw std::length_error("type counting: multinomial exceeds 64 bits");
  return static_cast<std::uint64_t>(result);
}

}  // namespace

bool is_subset_typical(const std::vector<std::vector<int>>& seqs,
                       const ConstraintSystem& cs, const TypicalityParams& tp) {
  validate_params(tp);
  const Alphabet& a = cs.alphabet;
  if (seqs.size() != static_cast<std::size_t>(a.num_variables()))
    throw std::invalid_argument("typicality: one sequence per variable required");
  for (int v = 0; v < a.num_variables(); ++v) {
    const auto& s = seqs[static_cast<std::size_t>(v)];
    if (s.size() != static_cast<std::size_t>(tp.n))
      throw std::invalid_argument("typicality: sequence length mismatch");
    for (int sym : s)
      if (sym < 0 || sym >= a.sizes[v])
        throw std::invalid_argument("typicality: symbol outside the alphabet");
  }
  TypeChecker checker(cs, tp);
  return checker.typical(seqs);
}

std::vector<Codebook> generate_codebooks(const ConstraintSystem& cs,
                                         const RatePoint& rates,
                                         const TypicalityParams& tp,
                                         const SuperpositionMap& superposition,
                                         std::uint64_t master_seed) {
  validate_params(tp);
  const Alphabet& a = cs.alphabet;
  const int n_vars = a.num_variables();
  if (rates.size() != static_cast<std::size_t>(n_vars))
    throw std::invalid_argument("codebooks: one rate per variable required");
  std::vector<std::vector<int>> parents = parent_lists(cs, superposition);

  std::vector<Codebook> books(static_cast<std::size_t>(n_vars));
  // Parents are unconditional, so generating in index order after handling
  // unconditional books first keeps every dependency available.
  std::vector<int> order;
  for (int v = 0; v < n_vars; ++v)
    if (parents[static_cast<std::size_t>(v)].empty()) order.push_back(v);
  for (int v = 0; v < n_vars; ++v)
    if (!parents[static_cast<std::size_t>(v)].empty()) order.push_back(v);

  for (int v : order) {
    Codebook& book = books[static_cast<std::size_t>(v)];
    book.variable = v;
    book.rate_bits = rates[static_cast<std::size_t>(v)];
    book.n = tp.n;
    book.seed = master_seed;
    book.parents = parents[static_cast<std::size_t>(v)];
    book.entries = entries_for_rate(book.rate_bits, tp.n);

    if (book.parents.empty()) {
      book.parent_blocks = 1;
      book.symbols.resize(book.entries * static_cast<std::uint64_t>(tp.n));
      const auto& pmf = cs.marginals[static_cast<std::size_t>(v)].probs;
      for (std::uint64_t m = 0; m < book.entries; ++m) {
        CounterRng rng(master_seed, {static_cast<std::uint64_t>(v), 0ull, m});
        for (int t = 0; t < tp.n; ++t)
          book.symbols[m * static_cast<std::uint64_t>(tp.n) + t] =
              static_cast<std::uint8_t>(rng.sample(static_cast<std::uint64_t>(t), pmf));
      }
      continue;
    }

    ConditionalLaw law = derive_conditional(cs, v, book.parents);
    book.parent_blocks = 1;
    for (int p : book.parents)
      book.parent_blocks *= books[static_cast<std::size_t>(p)].entries;
    if (book.parent_blocks * book.entries > (1ull << 40))
      throw std::length_error("codebooks: conditional table above 2^40 entries");
    book.symbols.resize(book.parent_blocks * book.entries *
                        static_cast<std::uint64_t>(tp.n));

    std::vector<double> row(static_cast<std::size_t>(law.child_size));
    for (std::uint64_t b = 0; b < book.parent_blocks; ++b) {
      // Decode the parent entry tuple (first listed parent slowest).
      std::vector<const std::uint8_t*> pseq;
      std::uint64_t rest = b;
      std::vector<std::uint64_t> pidx(book.parents.size(), 0);
      for (std::size_t k = book.parents.size(); k-- > 0;) {
        const Codebook& pb = books[static_cast<std::size_t>(book.parents[k])];
        pidx[k] = rest % pb.entries;
        rest /= pb.entries;
      }
      for (std::size_t k = 0; k < book.parents.size(); ++k)
        pseq.push_back(books[static_cast<std::size_t>(book.parents[k])].entry(0, pidx[k]));

      for (std::uint64_t m = 0; m < book.entries; ++m) {
        CounterRng rng(master_seed, {static_cast<std::uint64_t>(v), b, m});
        for (int t = 0; t < tp.n; ++t) {
          std::size_t pc = 0;
          for (std::size_t k = 0; k < book.parents.size(); ++k)
            pc = pc * static_cast<std::size_t>(a.sizes[book.parents[k]]) + pseq[k][t];
          const double* tab = law.table.data() + pc * static_cast<std::size_t>(law.child_size);
          row.assign(tab, tab + law.child_size);
          book.symbols[(b * book.entries + m) * static_cast<std::uint64_t>(tp.n) + t] =
              static_cast<std::uint8_t>(rng.sample(static_cast<std::uint64_t>(t), row));
        }
      }
    }
  }
  return books;
}

CoverOutcome covering_search(const std::vector<Codebook>& books,
                             const ConstraintSystem& cs, const TypicalityParams& tp,
                             std::uint64_t tuple_cap) {
  validate_params(tp);
  const Alphabet& a = cs.alphabet;
  const int n_vars = a.num_variables();
  if (books.size() != static_cast<std::size_t>(n_vars))
    throw std::invalid_argument("covering: one codebook per variable required");
  for (int v = 0; v < n_vars; ++v) {
    const Codebook& b = books[static_cast<std::size_t>(v)];
    if (b.variable != v)
      throw std::invalid_argument("covering: codebooks must be ordered by variable");
    if (b.n != tp.n) throw std::invalid_argument("covering: block length mismatch");
    if (b.symbols.size() != b.parent_blocks * b.entries * static_cast<std::uint64_t>(b.n))
      throw std::invalid_argument("covering: codebook symbol table has the wrong size");
  }
  std::uint64_t product = 1;
  for (const auto& b : books) {
    if (b.entries == 0 || product > tuple_cap / b.entries + 1)
      throw std::length_error("covering: tuple space above the cap");
    product *= b.entries;
  }
  if (product > tuple_cap)
    throw std::length_error("covering: tuple space above the cap");

  TypeChecker checker(cs, tp);
  std::vector<std::uint64_t> idx(static_cast<std::size_t>(n_vars), 0);
  std::vector<std::vector<int>> seqs(static_cast<std::size_t>(n_vars),
                                     std::vector<int>(static_cast<std::size_t>(tp.n)));
  CoverOutcome out;
  while (true) {
    for (int v = 0; v < n_vars; ++v) {
      const Codebook& b = books[static_cast<std::size_t>(v)];
      std::uint64_t parent_rank = 0;
      for (int p : b.parents)
        parent_rank = parent_rank * books[static_cast<std::size_t>(p)].entries +
                      idx[static_cast<std::size_t>(p)];
      const std::uint8_t* e = b.entry(parent_rank, idx[static_cast<std::size_t>(v)]);
      for (int t = 0; t < tp.n; ++t) seqs[static_cast<std::size_t>(v)][t] = e[t];
    }
    ++out.searched;
    if (checker.typical(seqs)) {
      out.found = true;
      out.indices = idx;
      return out;
    }
    int v = n_vars - 1;  // last variable fastest
    while (v >= 0 && ++idx[static_cast<std::size_t>(v)] ==
                         books[static_cast<std::size_t>(v)].entries)
      idx[static_cast<std::size_t>(v--)] = 0;
    if (v < 0) return out;
  }
}

CoverReport estimate_cover_prob(const ConstraintSystem& cs, const RatePoint& rates,
                                const TypicalityParams& tp, int trials,
                                std::uint64_t master_seed,
                                const SuperpositionMap& superposition,
                                std::uint64_t tuple_cap) {
  if (trials < 1) throw std::invalid_argument("cover estimate: need at least one trial");
  validate_params(tp);
  CoverReport rep;
  rep.trials = trials;
  rep.seed = master_seed;
  CounterRng splitter(master_seed, {kTrialStream});
  double searched_total = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::uint64_t trial_seed = splitter.word(static_cast<std::uint64_t>(trial));
    std::vector<Codebook> books =
        generate_codebooks(cs, rates, tp, superposition, trial_seed);
    CoverOutcome out = covering_search(books, cs, tp, tuple_cap);
    rep.per_trial_found.push_back(out.found ? 1 : 0);
    if (out.found) ++rep.successes;
    searched_total += static_cast<double>(out.searched);
  }
  rep.success_fraction = static_cast<double>(rep.successes) / trials;
  rep.searched_tuples_mean = searched_total / trials;

  const double z = 1.959963984540054;  // 95% two-sided normal quantile
  double p = rep.success_fraction;
  double denom = 1.0 + z * z / trials;
  double center = (p + z * z / (2.0 * trials)) / denom;
  double half =
      z * std::sqrt(p * (1.0 - p) / trials + z * z / (4.0 * trials * trials)) / denom;
  rep.wilson_low = std::max(0.0, center - half);
  rep.wilson_high = std::min(1.0, center + half);
  return rep;
}

std::vector<ExponentRow> exponent_probe(const ConstraintSystem& cs,
                                        const ExponentOptions& opts) {
  if (opts.n_min < 1 || opts.n_max < opts.n_min)
    throw std::invalid_argument("exponent probe: need 1 <= n_min <= n_max");
  if (!(opts.epsilon > 0.0) || !(opts.epsilon < 1.0))
    throw std::invalid_argument("exponent probe: slack must lie in (0, 1)");
  const Alphabet& a = cs.alphabet;

  MaxentResult me = maxent(cs);
  if (me.status == MaxentStatus::infeasible_detected)
    throw std::runtime_error("exponent probe: empty constraint polytope");
  const double h_star = me.entropy_bits;

  std::vector<ExponentRow> rows;

  if (opts.mode == ExponentMode::exact) {
    const double log_cells = std::log2(static_cast<double>(a.num_cells()));
    if (static_cast<double>(opts.n_max) * log_cells >
        std::log2(static_cast<double>(opts.space_cap)) + 1e-9)
      throw std::length_error("exponent probe: sequence space above the cap");

    for (int n = opts.n_min; n <= opts.n_max; ++n) {
      TypicalityParams tp{n, opts.epsilon};
      TypeChecker checker(cs, tp);
      std::vector<std::vector<std::size_t>> maps = checker.joint_cell_maps();
      std::vector<int> type(a.num_cells(), 0);
      std::uint64_t count = 0;
      // Enumerate joint types (compositions of n over the cells); every type
      // contributes a multinomial number of tuples when its subset marginals
      // pass the typicality window.
      auto rec = [&](auto&& self, std::size_t cell, int rem) -> void {
        if (cell + 1 == type.size() || rem == 0) {
          type[cell] = rem;
          std::fill(type.begin() + static_cast<std::ptrdiff_t>(cell) + 1, type.end(), 0);
          if (checker.type_typical(type, maps)) count += multinomial(n, type);
          type[cell] = 0;
          return;
        }
        for (int k = rem; k >= 0; --k) {
          type[cell] = k;
          self(self, cell + 1, rem - k);
        }
        type[cell] = 0;
      };
      rec(rec, 0, n);
      ExponentRow row;
      row.n = n;
      row.raw = static_cast<double>(count);
      row.exponent = count > 0
                         ? std::log2(static_cast<double>(count)) / n
                         : -std::numeric_limits<double>::infinity();
      row.reference = h_star;
      rows.push_back(row);
    }
    return rows;
  }

  // Monte Carlo: sample tuples from the generation measure and estimate the
  // typicality probability.
  if (opts.budget < 10000)
    throw std::invalid_argument("exponent probe: monte-carlo budget must be >= 10^4");
  std::vector<std::vector<int>> parents = parent_lists(cs, opts.superposition);
  std::vector<ConditionalLaw> laws(static_cast<std::size_t>(a.num_variables()));
  double conditional_sum = 0.0;  // sum of H(X_i | parents)
  std::vector<int> order;
  for (int v = 0; v < a.num_variables(); ++v)
    if (parents[static_cast<std::size_t>(v)].empty()) order.push_back(v);
  for (int v = 0; v < a.num_variables(); ++v)
    if (!parents[static_cast<std::size_t>(v)].empty()) order.push_back(v);
  for (int v = 0; v < a.num_variables(); ++v) {
    if (parents[static_cast<std::size_t>(v)].empty()) {
      conditional_sum += entropy_bits(cs.marginals[static_cast<std::size_t>(v)]);
    } else {
      laws[static_cast<std::size_t>(v)] =
          derive_conditional(cs, v, parents[static_cast<std::size_t>(v)]);
      const ConditionalLaw& law = laws[static_cast<std::size_t>(v)];
      // H(X_v | parents) = H(family) - H(parents)
      std::vector<int> fam_sizes;
      for (int fv : law.family) fam_sizes.push_back(a.sizes[fv]);
      std::vector<double> pj(law.parent_cells, 0.0);
      std::vector<int> sym(law.family.size(), 0);
      for (std::size_t r = 0; r < law.joint.size(); ++r) {
        std::size_t rest = r;
        for (std::size_t k = law.family.size(); k-- > 0;) {
          sym[k] = static_cast<int>(rest % static_cast<std::size_t>(fam_sizes[k]));
          rest /= static_cast<std::size_t>(fam_sizes[k]);
        }
        std::size_t pc = 0;
        for (std::size_t k = 0; k < law.family.size(); ++k)
          if (k != law.child_pos)
            pc = pc * static_cast<std::size_t>(fam_sizes[k]) +
                 static_cast<std::size_t>(sym[k]);
        pj[pc] += law.joint[r];
      }
      conditional_sum += plain_entropy(law.joint) - plain_entropy(pj);
    }
  }

  for (int n = opts.n_min; n <= opts.n_max; ++n) {
    TypicalityParams tp{n, opts.epsilon};
    TypeChecker checker(cs, tp);
    std::vector<std::vector<int>> seqs(static_cast<std::size_t>(a.num_variables()),
                                       std::vector<int>(static_cast<std::size_t>(n)));
    std::uint64_t hits = 0;
    for (std::uint64_t trial = 0; trial < opts.budget; ++trial) {
      CounterRng rng(opts.seed, {kProbeStream, static_cast<std::uint64_t>(n), trial});
      std::uint64_t counter = 0;
      std::vector<double> row;
      for (int v : order) {
        if (parents[static_cast<std::size_t>(v)].empty()) {
          const auto& pmf = cs.marginals[static_cast<std::size_t>(v)].probs;
          for (int t = 0; t < n; ++t)
            seqs[static_cast<std::size_t>(v)][t] = rng.sample(counter++, pmf);
        } else {
          const ConditionalLaw& law = laws[static_cast<std::size_t>(v)];
          const auto& ps = parents[static_cast<std::size_t>(v)];
          for (int t = 0; t < n; ++t) {
            std::size_t pc = 0;
            for (int p : ps)
              pc = pc * static_cast<std::size_t>(a.sizes[p]) +
                   static_cast<std::size_t>(seqs[static_cast<std::size_t>(p)][t]);
            const double* tab =
                law.table.data() + pc * static_cast<std::size_t>(law.child_size);
            row.assign(tab, tab + law.child_size);
            seqs[static_cast<std::size_t>(v)][t] = rng.sample(counter++, row);
          }
        }
      }
      if (checker.typical(seqs)) ++hits;
    }
    ExponentRow row;
    row.n = n;
    row.raw = static_cast<double>(hits) / static_cast<double>(opts.budget);
    row.exponent = hits > 0 ? -std::log2(row.raw) / n
                            : std::numeric_limits<double>::infinity();
    row.reference = conditional_sum - h_star;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace subsetcov
