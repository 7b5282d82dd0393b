#include "subsetcov/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "subsetcov/rng.hpp"
#include "subsetcov/simplex.hpp"

namespace subsetcov {

namespace {

constexpr double kInvLn2 = 1.4426950408889634;  // 1 / ln 2
constexpr double kTinyProb = 1e-300;

std::vector<int> mask_to_subset(std::uint32_t mask, int n) {
  std::vector<int> J;
  for (int i = 0; i < n; ++i)
    if (mask >> i & 1u) J.push_back(i);
  return J;
}

std::string subset_name(const std::vector<int>& J) {
  std::ostringstream s;
  s << "{";
  for (std::size_t k = 0; k < J.size(); ++k) s << (k ? "," : "") << J[k];
  s << "}";
  return s.str();
}

void validate_rates(const RatePoint& r, int n, const char* who) {
  if (static_cast<int>(r.size()) != n)
    throw std::invalid_argument(std::string(who) + ": rate dimension mismatch");
  for (double v : r)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string(who) + ": rates must be nonnegative reals");
}

// Marginal cell maps and constant offsets for every nonempty subset mask.
struct MaskTables {
  int n = 0;
  std::vector<double> base;                        // sum_{i in J} r_i - H(X_i)
  std::vector<std::vector<std::uint32_t>> cell_of; // joint cell -> subset cell
  std::vector<std::size_t> cells;
};

MaskTables build_mask_tables(const ConstraintSystem& cs, const RatePoint& r) {
  const Alphabet& a = cs.alphabet;
  const int n = a.num_variables();
  const std::uint32_t top = (1u << n) - 1u;
  MaskTables t;
  t.n = n;
  t.base.assign(top + 1, 0.0);
  t.cell_of.resize(top + 1);
  t.cells.assign(top + 1, 0);
  std::vector<double> hx(n);
  for (int i = 0; i < n; ++i) hx[i] = entropy_bits(cs.marginals[i]);
  for (std::uint32_t mask = 1; mask <= top; ++mask) {
    std::vector<int> J = mask_to_subset(mask, n);
    double b = 0.0;
    std::size_t cells = 1;
    for (int v : J) {
      b += r[v] - hx[v];
      cells *= static_cast<std::size_t>(a.sizes[v]);
    }
    t.base[mask] = b;
    t.cells[mask] = cells;
    t.cell_of[mask].resize(a.num_cells());
    for (std::size_t rr = 0; rr < a.num_cells(); ++rr) {
      std::vector<int> x = a.unrank(rr);
      std::size_t s = 0;
      for (int v : J) s = s * static_cast<std::size_t>(a.sizes[v]) + x[v];
      t.cell_of[mask][rr] = static_cast<std::uint32_t>(s);
    }
  }
  return t;
}

double marginal_entropy(const MaskTables& t, std::uint32_t mask,
                        const std::vector<double>& p, std::vector<double>& scratch) {
  scratch.assign(t.cells[mask], 0.0);
  for (std::size_t rr = 0; rr < p.size(); ++rr) scratch[t.cell_of[mask][rr]] += p[rr];
  double h = 0.0;
  for (double v : scratch)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

}  // namespace

ConstraintSystem restricted_system(const ConstraintSystem& cs, const std::vector<int>& vars) {
  const std::vector<int>& J = vars;
  std::vector<int> sizes;
  for (int v : J) sizes.push_back(cs.alphabet.sizes[v]);
  Alphabet sub = make_alphabet(sizes);
  std::vector<JointPMF> marg;
  for (int v : J) marg.push_back(cs.marginals[v]);

  std::vector<SubsetConstraint> cons;
  std::set<std::vector<int>> seen;
  for (const auto& con : cs.constraints) {
    std::vector<int> inter;
    std::vector<int> where;
    for (std::size_t k = 0; k < con.subset.size(); ++k) {
      auto it = std::lower_bound(J.begin(), J.end(), con.subset[k]);
      if (it != J.end() && *it == con.subset[k]) {
        inter.push_back(static_cast<int>(it - J.begin()));
        where.push_back(static_cast<int>(k));
      }
    }
    if (inter.empty() || !seen.insert(inter).second) continue;
    cons.push_back({inter, marginalize(con.target, where)});
  }
  return make_constraint_system(sub, marg, cons);
}

InequalitySystem build_rstar(const ConstraintSystem& cs, const MaxentOptions& opts) {
  const int n = cs.alphabet.num_variables();
  std::vector<double> hx(n);
  for (int i = 0; i < n; ++i) hx[i] = entropy_bits(cs.marginals[i]);

  InequalitySystem sys;
  sys.num_variables = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> J = mask_to_subset(mask, n);
    MaxentResult res = maxent(restricted_system(cs, J), opts);
    if (res.status != MaxentStatus::converged)
      throw std::runtime_error("build_rstar: restricted maxent did not converge for subset " +
                               subset_name(J));
    double sum = 0.0;
    for (int v : J) sum += hx[v];
    sys.bounds.push_back({mask, sum - res.entropy_bits});
  }
  return sys;
}

InequalitySystem build_ra_fixed(const JointPMF& p_tilde) {
  const Alphabet& a = p_tilde.alphabet;
  const int n = a.num_variables();
  std::vector<double> hx(n);
  for (int i = 0; i < n; ++i) hx[i] = entropy_bits(marginalize(p_tilde, {i}));

  InequalitySystem sys;
  sys.num_variables = n;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> J = mask_to_subset(mask, n);
    double sum = 0.0;
    for (int v : J) sum += hx[v];
    sys.bounds.push_back({mask, sum - entropy_bits(marginalize(p_tilde, J))});
  }
  return sys;
}

MembershipVerdict point_in_system(const RatePoint& r, const InequalitySystem& sys,
                                  double tol) {
  validate_rates(r, sys.num_variables, "point_in_system");
  MembershipVerdict v;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : sys.bounds) {
    double sum = 0.0;
    for (int i = 0; i < sys.num_variables; ++i)
      if (b.subset_mask >> i & 1u) sum += r[i];
    double slack = sum - b.bound_bits;
    if (slack < best) {
      best = slack;
      v.argmin_mask = b.subset_mask;
    }
  }
  v.margin = best;
  v.status = best >= -tol ? Verdict::inside : Verdict::outside;
  return v;
}

RaUnionResult point_in_ra_union(const RatePoint& r, const ConstraintSystem& cs,
                                const RaUnionOptions& opts) {
  const Alphabet& a = cs.alphabet;
  validate_rates(r, a.num_variables(), "point_in_ra_union");
  const MaskTables tables = build_mask_tables(cs, r);
  const std::uint32_t top = (1u << a.num_variables()) - 1u;

  // Start from the maximum-entropy point: feasible, interior to the face, and
  // already optimal whenever one distribution maximizes every subset entropy.
  MaxentResult me = maxent(cs, opts.maxent);
  if (me.status == MaxentStatus::infeasible_detected)
    throw std::runtime_error("point_in_ra_union: empty constraint polytope");
  std::vector<double> p = me.distribution.probs;

  PolytopeRows rows = constraint_rows(cs);

  std::vector<double> scratch;
  std::vector<double> g(top + 1, 0.0);
  auto fill_g = [&](const std::vector<double>& q) {
    for (std::uint32_t mask = 1; mask <= top; ++mask)
      g[mask] = tables.base[mask] + marginal_entropy(tables, mask, q, scratch);
  };
  auto softmin = [&](double temperature) {
    double m = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 1; mask <= top; ++mask) m = std::min(m, g[mask]);
    double z = 0.0;
    for (std::uint32_t mask = 1; mask <= top; ++mask)
      z += std::exp2(-(g[mask] - m) / temperature);
    return m - temperature * std::log2(z);
  };
  auto true_min = [&](std::uint32_t& argmin) {
    double m = std::numeric_limits<double>::infinity();
    argmin = 1;
    for (std::uint32_t mask = 1; mask <= top; ++mask)
      if (g[mask] < m) {
        m = g[mask];
        argmin = mask;
      }
    return m;
  };

  RaUnionResult out;
  fill_g(p);
  std::uint32_t best_arg = 1;
  double best_val = true_min(best_arg);
  std::vector<double> best_p = p;

  std::vector<double> grad(a.num_cells());
  std::vector<double> candidate(a.num_cells());
  std::vector<std::vector<double>> marg_cache(top + 1);

  bool certified_inside = false;
  for (double temperature : opts.temperatures) {
    if (certified_inside) break;
    std::vector<double> series;
    for (int k = 0; k < opts.iterations_per_stage; ++k) {
      fill_g(p);
      double m = std::numeric_limits<double>::infinity();
      for (std::uint32_t mask = 1; mask <= top; ++mask) m = std::min(m, g[mask]);
      double z = 0.0;
      std::vector<double> w(top + 1, 0.0);
      for (std::uint32_t mask = 1; mask <= top; ++mask) {
        w[mask] = std::exp2(-(g[mask] - m) / temperature);
        z += w[mask];
      }
      for (std::uint32_t mask = 1; mask <= top; ++mask) {
        w[mask] /= z;
        marg_cache[mask].assign(tables.cells[mask], 0.0);
        for (std::size_t rr = 0; rr < p.size(); ++rr)
          marg_cache[mask][tables.cell_of[mask][rr]] += p[rr];
      }
      const double f_here = m - temperature * std::log2(z);

      for (std::size_t rr = 0; rr < p.size(); ++rr) {
        double dv = 0.0;
        for (std::uint32_t mask = 1; mask <= top; ++mask) {
          double q = std::max(marg_cache[mask][tables.cell_of[mask][rr]], kTinyProb);
          dv += w[mask] * (-std::log2(q) - kInvLn2);
        }
        grad[rr] = dv;
      }

      LPResult lp = solve_lp(rows.A, rows.b, grad);
      if (lp.status != LPStatus::optimal)
        throw std::runtime_error("point_in_ra_union: membership LP oracle failed");

      // Frank-Wolfe step toward the vertex, halved until the smoothed
      // objective does not decrease (concavity guarantees acceptance for a
      // small enough step unless already stationary).
      double gamma = 2.0 / (static_cast<double>(k) + 2.0);
      double f_next = -std::numeric_limits<double>::infinity();
      while (gamma > 1e-14) {
        for (std::size_t rr = 0; rr < p.size(); ++rr)
          candidate[rr] = p[rr] + gamma * (lp.x[rr] - p[rr]);
        fill_g(candidate);
        f_next = softmin(temperature);
        if (f_next >= f_here) break;
        gamma *= 0.5;
      }
      if (f_next >= f_here) {
        p = candidate;
        fill_g(p);
      } else {
        fill_g(p);
      }
      series.push_back(softmin(temperature));

      std::uint32_t arg = 1;
      double val = true_min(arg);
      if (val > best_val) {
        best_val = val;
        best_arg = arg;
        best_p = p;
      }
      if (best_val >= 0.0) {
        certified_inside = true;
        break;
      }
    }
    out.objective_history.push_back(std::move(series));
  }

  out.verdict.margin = best_val;
  out.verdict.argmin_mask = best_arg;
  out.verdict.witness = make_joint(a, best_p, true);
  if (best_val >= -opts.inside_tol)
    out.verdict.status = Verdict::inside;
  else if (best_val <= -opts.outside_tol)
    out.verdict.status = Verdict::outside;
  else
    out.verdict.status = Verdict::boundary_indeterminate;
  return out;
}

ZeroRateCertificate zero_rate_certificate(const ConstraintSystem& cs,
                                          const std::vector<int>& zero_set) {
  if (zero_set.empty())
    throw std::invalid_argument("zero_rate_certificate: empty zero set");
  const Alphabet& a = cs.alphabet;
  std::vector<int> Z = zero_set;
  std::sort(Z.begin(), Z.end());
  Z.erase(std::unique(Z.begin(), Z.end()), Z.end());
  if (Z.front() < 0 || Z.back() >= a.num_variables())
    throw std::invalid_argument("zero_rate_certificate: variable index out of range");

  PolytopeRows rows = constraint_rows(cs);
  // Pin the zero-set marginal to the product of its stored marginals: zero
  // rates force mutual independence inside the set.
  std::size_t cells = 1;
  for (int v : Z) cells *= static_cast<std::size_t>(a.sizes[v]);
  std::vector<std::vector<double>> pin(cells, std::vector<double>(a.num_cells(), 0.0));
  std::vector<double> target(cells, 0.0);
  for (std::size_t rr = 0; rr < a.num_cells(); ++rr) {
    std::vector<int> x = a.unrank(rr);
    std::size_t s = 0;
    for (int v : Z) s = s * static_cast<std::size_t>(a.sizes[v]) + x[v];
    pin[s][rr] = 1.0;
  }
  for (std::size_t s = 0; s < cells; ++s) {
    std::size_t rest = s;
    double prod = 1.0;
    for (std::size_t k = Z.size(); k-- > 0;) {
      int v = Z[k];
      prod *= cs.marginals[v].probs[rest % static_cast<std::size_t>(a.sizes[v])];
      rest /= static_cast<std::size_t>(a.sizes[v]);
    }
    target[s] = prod;
  }
  for (std::size_t s = 0; s < cells; ++s) {
    rows.A.push_back(std::move(pin[s]));
    rows.b.push_back(target[s]);
  }

  LPResult res = solve_lp(rows.A, rows.b, {});
  ZeroRateCertificate cert;
  cert.phase1_objective = res.phase1_objective;
  cert.basis = res.basis;
  if (res.status != LPStatus::optimal) return cert;
  cert.feasible = true;
  cert.witness = make_joint(a, res.x, true);
  return cert;
}

SubsumptionReport subsumption_check(const ConstraintSystem& cs, int samples,
                                    std::uint64_t seed, const MaxentOptions& opts) {
  if (samples < 1)
    throw std::invalid_argument("subsumption_check: need at least one sample");
  const Alphabet& a = cs.alphabet;
  InequalitySystem rstar = build_rstar(cs, opts);
  MaxentResult me = maxent(cs, opts);
  if (me.status != MaxentStatus::converged)
    throw std::runtime_error("subsumption_check: maxent on the full system failed");
  std::vector<std::size_t> face = me.support;
  if (face.empty())
    for (std::size_t c = 0; c < a.num_cells(); ++c)
      if (me.distribution.probs[c] > 1e-12) face.push_back(c);

  SubsumptionReport rep;
  rep.max_violation_bits = -std::numeric_limits<double>::infinity();
  CounterRng rng(seed, {0x73756273756d70ull});  // stream tag

  std::uint64_t counter = 0;
  int attempts = 0;
  while (rep.samples < samples && attempts < 20 * samples) {
    ++attempts;
    // Random positive start on the face (unit-rate exponential weights =
    // flat Dirichlet); its I-projection is a varied feasible joint.
    std::vector<double> p(a.num_cells(), 0.0);
    double total = 0.0;
    for (std::size_t c : face) {
      double u = std::max(rng.uniform01(counter++), 1e-12);
      p[c] = -std::log(u);
      total += p[c];
    }
    for (std::size_t c : face) p[c] /= total;
    MaxentResult proj = ipf_project(cs, make_joint(a, p, true), opts);
    if (proj.status != MaxentStatus::converged) continue;

    InequalitySystem ra = build_ra_fixed(proj.distribution);
    for (std::size_t i = 0; i < rstar.bounds.size(); ++i) {
      double viol = rstar.bounds[i].bound_bits - ra.bounds[i].bound_bits;
      if (viol > rep.max_violation_bits) {
        rep.max_violation_bits = viol;
        rep.worst_mask = rstar.bounds[i].subset_mask;
      }
    }
    ++rep.samples;
  }
  return rep;
}

}  // namespace subsetcov
