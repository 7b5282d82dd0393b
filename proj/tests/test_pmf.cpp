#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "subsetcov/pmf.hpp"

using namespace subsetcov;

namespace {

JointPMF permute_axes_oracle(const JointPMF& p, const std::vector<int>& perm) {
  // perm[k] = source axis placed at position k; independent re-indexing.
  std::vector<int> new_sizes;
  for (int s : perm) new_sizes.push_back(p.alphabet.sizes[s]);
  Alphabet na = make_alphabet(new_sizes);
  std::vector<double> out(p.probs.size(), 0.0);
  auto cells = oracle::all_cells(p.alphabet.sizes);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::vector<int> y;
    for (int s : perm) y.push_back(cells[r][s]);
    out[na.rank(y)] += p.probs[r];
  }
  return make_joint(na, out);
}

}  // namespace

TEST_CASE("alphabet rank/unrank roundtrip and bounds") {
  Alphabet a = make_alphabet({2, 3, 4});
  CHECK(a.num_cells() == 24);
  for (std::size_t r = 0; r < a.num_cells(); ++r) {
    auto x = a.unrank(r);
    CHECK(a.rank(x) == r);
  }
  CHECK_THROWS_AS(make_alphabet({}), std::invalid_argument);
  CHECK_THROWS_AS(make_alphabet({0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_alphabet({9}), std::invalid_argument);
  CHECK_THROWS_AS(make_alphabet({2, 2, 2, 2, 2, 2, 2, 2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_alphabet({8, 8, 8, 8, 8}), std::invalid_argument);  // > 4096 cells
}

TEST_CASE("joint construction enforces mass and nonnegativity") {
  Alphabet a = make_alphabet({2, 2});
  CHECK_THROWS_AS(make_joint(a, {0.5, 0.5, 0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(make_joint(a, {1.5, -0.5, 0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_joint(a, {1.0, 0.0, 0.0}), std::invalid_argument);
  JointPMF p = make_joint(a, {2.0, 2.0, 2.0, 2.0}, true);  // normalize
  for (double v : p.probs) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));
  JointPMF u = uniform_joint(a);
  CHECK(u.probs[3] == doctest::Approx(0.25));
}

TEST_CASE("marginalize: frozen examples") {
  Alphabet a2 = make_alphabet({2, 2});
  JointPMF uni = uniform_joint(a2);
  auto m = marginalize(uni, {0});
  CHECK(m.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(m.probs[1] == doctest::Approx(0.5).epsilon(1e-12));

  // xor/and construction, subset {0,3} -> the (1/2, 0, 1/4, 1/4) pair
  JointPMF w = oracle::xor_and_joint();
  auto pair = marginalize(w, {0, 3});
  CHECK(pair.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pair.probs[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pair.probs[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pair.probs[3] == doctest::Approx(0.25).epsilon(1e-12));

  // identity on the full index list
  auto full = marginalize(w, {0, 1, 2, 3});
  for (std::size_t i = 0; i < w.probs.size(); ++i)
    CHECK(full.probs[i] == doctest::Approx(w.probs[i]).epsilon(1e-12));
}

TEST_CASE("marginalize: argument errors") {
  JointPMF w = oracle::xor_and_joint();
  CHECK_THROWS_AS(marginalize(w, {}), std::invalid_argument);
  CHECK_THROWS_AS(marginalize(w, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(marginalize(w, {2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(marginalize(w, {0, 4}), std::invalid_argument);
}

TEST_CASE("marginalize agrees with brute-force oracle and composes") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    JointPMF p = oracle::random_joint({2, 3, 2, 2}, rng);
    std::vector<std::vector<int>> subsets = {{0}, {1}, {3}, {0, 2}, {1, 3}, {0, 1, 3}, {0, 1, 2, 3}};
    for (const auto& sub : subsets) {
      auto got = marginalize(p, sub);
      auto want = oracle::marginal_oracle(p, sub);
      REQUIRE(got.probs.size() == want.size());
      double sum = 0.0;
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got.probs[i] == doctest::Approx(want[i]).epsilon(0).scale(1).epsilon(1e-12));
        sum += got.probs[i];
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
    // nested composition: B = {0,1,3}, A = {0,3} (positions {0,2} inside B)
    auto big = marginalize(p, {0, 1, 3});
    auto direct = marginalize(p, {0, 3});
    auto nested = marginalize(big, {0, 2});
    for (std::size_t i = 0; i < direct.probs.size(); ++i)
      CHECK(std::abs(nested.probs[i] - direct.probs[i]) <= 1e-12);
  }
}

TEST_CASE("entropy: frozen examples and permutation invariance") {
  Alphabet a2 = make_alphabet({2, 2});
  CHECK(entropy_bits(uniform_joint(a2)) == doctest::Approx(2.0).epsilon(1e-12));
  JointPMF tab1 = make_joint(a2, {0.5, 0.0, 0.25, 0.25});
  CHECK(entropy_bits(tab1) == doctest::Approx(oracle::kTable1PairEntropy).epsilon(1e-12));
  JointPMF point = make_joint(a2, {1.0, 0.0, 0.0, 0.0});
  CHECK(entropy_bits(point) == doctest::Approx(0.0));

  std::mt19937 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    JointPMF p = oracle::random_joint({2, 3, 4}, rng);
    double h = entropy_bits(p);
    CHECK(h == doctest::Approx(oracle::entropy_oracle(p.probs)).epsilon(1e-12));
    for (std::vector<int> perm : {std::vector<int>{2, 0, 1}, {1, 2, 0}, {2, 1, 0}}) {
      CHECK(entropy_bits(permute_axes_oracle(p, perm)) == doctest::Approx(h).epsilon(1e-12));
    }
    // strict upper bound for non-uniform
    double cap = std::log2(24.0);
    CHECK(h >= 0.0);
    CHECK(h < cap);
  }
  CHECK(entropy_bits(uniform_joint(make_alphabet({2, 3, 4}))) ==
        doctest::Approx(std::log2(24.0)).epsilon(1e-12));
}

TEST_CASE("conditional entropy: frozen examples") {
  // independent fair bits
  JointPMF uni = uniform_joint(make_alphabet({2, 2}));
  CHECK(conditional_entropy_bits(uni, {0}, {1}) == doctest::Approx(1.0).epsilon(1e-12));

  // deterministic and-function
  JointPMF w = oracle::xor_and_joint();
  CHECK(conditional_entropy_bits(w, {3}, {0, 1}) == doctest::Approx(0.0).epsilon(1e-12));

  // Table-1 pair: H(X4 | Xi) = 1.5 - 1.0
  JointPMF tab1 = make_joint(make_alphabet({2, 2}), {0.5, 0.0, 0.25, 0.25});
  CHECK(conditional_entropy_bits(tab1, {1}, {0}) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(conditional_entropy_bits(uni, {0}, {0}), std::invalid_argument);
}

TEST_CASE("kl divergence: frozen examples and sentinel") {
  Alphabet a = make_alphabet({2, 2});
  JointPMF uni = uniform_joint(a);
  JointPMF point = make_joint(a, {1.0, 0.0, 0.0, 0.0});
  CHECK(kl_divergence_bits(uni, uni) == doctest::Approx(0.0));
  CHECK(kl_divergence_bits(point, uni) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::isinf(kl_divergence_bits(uni, point)));
  CHECK_THROWS_AS(kl_divergence_bits(point, uniform_joint(make_alphabet({4}))),
                  std::invalid_argument);

  std::mt19937 rng(7);
  for (int t = 0; t < 10; ++t) {
    JointPMF p = oracle::random_joint({2, 2, 2}, rng);
    JointPMF q = oracle::random_joint({2, 2, 2}, rng);
    CHECK(kl_divergence_bits(p, q) >= 0.0);
  }
}

TEST_CASE("product of marginals and the Lemma-1 identity") {
  ConstraintSystem t2 = oracle::theorem2_system();
  JointPMF q = product_of_marginals(t2);
  for (std::size_t r = 0; r < 16; ++r) {
    auto x = q.alphabet.unrank(r);
    double want = (1.0 / 8.0) * (x[3] == 0 ? 0.75 : 0.25);
    CHECK(q.probs[r] == doctest::Approx(want).epsilon(1e-12));
  }

  // D(p || product of marginals) = sum H(X_i) - H(p) when marginals match
  std::mt19937 rng(13);
  for (int trial = 0; trial < 15; ++trial) {
    JointPMF p = oracle::random_joint({2, 3, 2}, rng);
    ConstraintSystem cs = system_from_joint(p, {{0, 1}, {1, 2}});
    double lhs = kl_divergence_bits(p, product_of_marginals(cs));
    double rhs = -entropy_bits(p);
    for (int v = 0; v < 3; ++v) rhs += entropy_bits(marginalize(p, {v}));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }

  // degenerate cases
  ConstraintSystem one = system_from_joint(
      make_joint(make_alphabet({3}), {0.2, 0.3, 0.5}), {{0}});
  auto q1 = product_of_marginals(one);
  CHECK(q1.probs[2] == doctest::Approx(0.5).epsilon(1e-12));
  JointPMF pts = make_joint(make_alphabet({2, 2}), {0.0, 0.0, 0.0, 1.0});
  ConstraintSystem cs_pts = system_from_joint(pts, {{0}, {1}});
  auto q2 = product_of_marginals(cs_pts);
  CHECK(q2.probs[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("consistency report") {
  CHECK(check_consistency(oracle::theorem2_system()).ok);

  // a system marginalized from one joint is always consistent
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    JointPMF p = oracle::random_joint({2, 2, 3}, rng);
    ConstraintSystem cs = system_from_joint(p, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(check_consistency(cs).ok);
  }

  // constructed inconsistency: two constraints disagree on a shared variable
  Alphabet a = make_alphabet({2, 2, 2});
  Alphabet bit = make_alphabet({2});
  Alphabet pair = make_alphabet({2, 2});
  std::vector<JointPMF> marg = {make_joint(bit, {0.5, 0.5}),
                                make_joint(bit, {0.5, 0.5}),
                                make_joint(bit, {0.5, 0.5})};
  // first pins X_1 fair inside (0,1); second forces P(X_1=0)=0.9 inside (1,2)? no —
  // shared variable of (0,1) and (1,2) is 1; make them disagree on it.
  JointPMF fair_pair = uniform_joint(pair);
  JointPMF skew_pair = make_joint(pair, {0.45, 0.45, 0.05, 0.05});  // X_2: P(0)=0.9
  ConstraintSystem bad = make_constraint_system(
      a, marg, {{{0, 1}, fair_pair}, {{1, 2}, skew_pair}});
  auto rep = check_consistency(bad);
  CHECK_FALSE(rep.ok);
  bool found_pair = false;
  for (const auto& v : rep.violations) {
    if (v.constraint_a == 0 && v.constraint_b == 1) {
      found_pair = true;
      CHECK(v.intersection == std::vector<int>{1});
      CHECK(v.deviation == doctest::Approx(0.4).epsilon(1e-9));
    }
  }
  CHECK(found_pair);

  // empty constraint list is vacuously ok
  ConstraintSystem empty = make_constraint_system(a, marg, {});
  CHECK(check_consistency(empty).ok);
}

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(binary_entropy(0.25) == doctest::Approx(oracle::kHbQuarter).epsilon(1e-12));
  CHECK(binary_entropy(0.0) == doctest::Approx(0.0));
  CHECK(binary_entropy(1.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.1), std::invalid_argument);
}
