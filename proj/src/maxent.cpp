#include "subsetcov/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "subsetcov/simplex.hpp"

namespace subsetcov {

namespace {

// One fitting target per sweep step: a subset, its target marginal, and the
// precomputed joint-cell -> subset-cell map.
struct SweepItem {
  std::vector<int> subset;
  const std::vector<double>* target = nullptr;
  std::vector<std::uint32_t> cell_of;
  std::size_t cells = 0;
};

std::vector<SweepItem> build_sweep(const ConstraintSystem& cs) {
  const Alphabet& a = cs.alphabet;
  std::vector<SweepItem> items;
  auto push = [&](const std::vector<int>& subset, const std::vector<double>& target) {
    SweepItem it;
    it.subset = subset;
    it.target = &target;
    it.cells = target.size();
    it.cell_of.resize(a.num_cells());
    for (std::size_t r = 0; r < a.num_cells(); ++r) {
      std::vector<int> x = a.unrank(r);
      std::size_t sub = 0;
      for (int v : subset) sub = sub * static_cast<std::size_t>(a.sizes[v]) + x[v];
      it.cell_of[r] = static_cast<std::uint32_t>(sub);
    }
    items.push_back(std::move(it));
  };
  for (int i = 0; i < a.num_variables(); ++i) push({i}, cs.marginals[i].probs);
  for (const auto& con : cs.constraints) push(con.subset, con.target.probs);
  return items;
}

double sweep_residual(const std::vector<SweepItem>& items, const std::vector<double>& p) {
  double worst = 0.0;
  std::vector<double> q;
  for (const auto& it : items) {
    q.assign(it.cells, 0.0);
    for (std::size_t r = 0; r < p.size(); ++r) q[it.cell_of[r]] += p[r];
    for (std::size_t c = 0; c < it.cells; ++c)
      worst = std::max(worst, std::abs(q[c] - (*it.target)[c]));
  }
  return worst;
}

double plain_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// Shared sweep loop: runs IPF from the state in `p`, filling iteration counts,
// residual history and the converged/iteration-limit status on `out`.
void run_sweeps(const ConstraintSystem& cs, const MaxentOptions& opts,
                std::vector<double>& p, MaxentResult& out) {
  const std::vector<SweepItem> items = build_sweep(cs);
  std::vector<double> q;
  std::vector<double> before_sweep;
  double prev_entropy = plain_entropy(p);
  int sweeps = 0;
  double residual = sweep_residual(items, p);

  while (sweeps < opts.max_iterations) {
    before_sweep = p;
    for (const auto& it : items) {
      q.assign(it.cells, 0.0);
      for (std::size_t r = 0; r < p.size(); ++r) q[it.cell_of[r]] += p[r];
      for (std::size_t r = 0; r < p.size(); ++r) {
        double cur = q[it.cell_of[r]];
        if (cur > 0.0)
          p[r] = (p[r] / cur) * (*it.target)[it.cell_of[r]];
        // cur == 0 implies p[r] == 0 already; an unreachable positive target
        // shows up in the residual, never as a division.
      }
    }
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (total <= 0.0) {
      // Incompatible zero patterns wiped out every cell (possible only off the
      // support face, e.g. an empty polytope): keep the last live iterate and
      // stop. Infeasibility remains the LP's call, not IPF's.
      p = before_sweep;
      ++sweeps;
      residual = sweep_residual(items, p);
      out.residual_history.push_back(residual);
      break;
    }
    for (double& v : p) v /= total;
    ++sweeps;
    residual = sweep_residual(items, p);
    out.residual_history.push_back(residual);
    double h = plain_entropy(p);
    if (residual <= opts.residual_tolerance) {
      out.status = MaxentStatus::converged;
      break;
    }
    // Stop on stagnation only: entropy frozen while the residual has stopped
    // shrinking (oscillation or a sublinear tail), never during geometric
    // progress. Status stays iteration-limit; infeasibility is the LP's call.
    bool stalled = sweeps >= 2 && std::abs(h - prev_entropy) <= opts.entropy_tolerance &&
                   residual >= 0.99 * out.residual_history[static_cast<std::size_t>(sweeps) - 2];
    prev_entropy = h;
    if (stalled) break;
  }

  out.iterations = sweeps;
  out.residual = residual;
  out.distribution = make_joint(cs.alphabet, p, true);
  out.entropy_bits = entropy_bits(out.distribution);
}

void validate_options(const MaxentOptions& opts) {
  if (opts.max_iterations < 1 || opts.residual_tolerance <= 0.0 ||
      opts.entropy_tolerance <= 0.0)
    throw std::invalid_argument("maxent: options out of range");
}

void require_consistent(const ConstraintSystem& cs) {
  ConsistencyReport rep = check_consistency(cs);
  if (rep.ok) return;
  double worst = 0.0;
  for (const auto& v : rep.violations) worst = std::max(worst, v.deviation);
  std::ostringstream msg;
  msg << "maxent: inconsistent constraint system (" << rep.violations.size()
      << " conflicting overlap(s), worst deviation " << worst << ")";
  throw std::invalid_argument(msg.str());
}

}  // namespace

PolytopeRows constraint_rows(const ConstraintSystem& cs) {
  const Alphabet& a = cs.alphabet;
  const std::size_t n = a.num_cells();
  PolytopeRows out;
  auto add_rows = [&](const std::vector<int>& subset, const std::vector<double>& target) {
    std::vector<std::vector<double>> rows(target.size(), std::vector<double>(n, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
      std::vector<int> x = a.unrank(r);
      std::size_t sub = 0;
      for (int v : subset) sub = sub * static_cast<std::size_t>(a.sizes[v]) + x[v];
      rows[sub][r] = 1.0;
    }
    for (std::size_t c = 0; c < target.size(); ++c) {
      out.A.push_back(std::move(rows[c]));
      out.b.push_back(target[c]);
    }
  };
  for (int i = 0; i < a.num_variables(); ++i) add_rows({i}, cs.marginals[i].probs);
  for (const auto& con : cs.constraints) add_rows(con.subset, con.target.probs);
  out.A.push_back(std::vector<double>(n, 1.0));
  out.b.push_back(1.0);
  return out;
}

SupportFace support_face(const ConstraintSystem& cs, double tol) {
  PolytopeRows rows = constraint_rows(cs);
  const std::size_t n = cs.alphabet.num_cells();
  SupportFace out;
  LPResult feas = solve_lp(rows.A, rows.b, {});
  if (feas.status != LPStatus::optimal) return out;
  out.feasible = true;

  std::vector<char> in_face(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (feas.x[i] > tol) in_face[i] = 1;

  // Grow the face: maximize the total mass of still-undetermined cells; any
  // cell positive in an optimum is attainable, and once the optimum itself is
  // ~0 every remaining cell is identically zero over the whole polytope.
  while (true) {
    std::vector<double> c(n, 0.0);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_face[i]) {
        c[i] = 1.0;
        any = true;
      }
    if (!any) break;
    LPResult lp = solve_lp(rows.A, rows.b, c);
    if (lp.status != LPStatus::optimal || lp.objective <= tol) break;
    bool progress = false;
    for (std::size_t i = 0; i < n; ++i)
      if (!in_face[i] && lp.x[i] > tol) {
        in_face[i] = 1;
        progress = true;
      }
    if (!progress) break;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (in_face[i]) out.cells.push_back(i);
  return out;
}

FeasibilityCertificate feasibility(const ConstraintSystem& cs, double pivot_tol) {
  PolytopeRows rows = constraint_rows(cs);
  LPResult res = solve_lp(rows.A, rows.b, {}, pivot_tol);
  FeasibilityCertificate cert;
  cert.phase1_objective = res.phase1_objective;
  cert.basis = res.basis;
  if (res.status != LPStatus::optimal) return cert;
  cert.feasible = true;
  double worst = 0.0;
  for (std::size_t r = 0; r < rows.A.size(); ++r) {
    double dot = 0.0;
    for (std::size_t j = 0; j < res.x.size(); ++j) dot += rows.A[r][j] * res.x[j];
    worst = std::max(worst, std::abs(dot - rows.b[r]));
  }
  cert.max_residual = worst;
  cert.witness = make_joint(cs.alphabet, res.x, true);
  return cert;
}

MaxentResult maxent(const ConstraintSystem& cs, const MaxentOptions& opts) {
  validate_options(opts);
  require_consistent(cs);

  const Alphabet& a = cs.alphabet;
  MaxentResult out;
  std::vector<double> p(a.num_cells(), 0.0);
  if (opts.restrict_support) {
    SupportFace face = support_face(cs, opts.support_tolerance);
    if (!face.feasible) {
      out.status = MaxentStatus::infeasible_detected;
      out.distribution = uniform_joint(a);
      out.entropy_bits = entropy_bits(out.distribution);
      return out;
    }
    out.support = face.cells;
    for (std::size_t c : face.cells) p[c] = 1.0 / static_cast<double>(face.cells.size());
  } else {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(a.num_cells()));
  }

  run_sweeps(cs, opts, p, out);
  return out;
}

MaxentResult ipf_project(const ConstraintSystem& cs, const JointPMF& init,
                         const MaxentOptions& opts) {
  validate_options(opts);
  require_consistent(cs);
  if (!(init.alphabet == cs.alphabet))
    throw std::invalid_argument("ipf_project: initial point has the wrong alphabet");

  MaxentResult out;
  std::vector<double> p = init.probs;
  run_sweeps(cs, opts, p, out);
  return out;
}

MaxentResult conditional_maxent(const ConstraintSystem& cs_joint,
                                const std::vector<int>& u_vars,
                                const std::vector<int>& x_vars,
                                const MaxentOptions& opts) {
  const Alphabet& a = cs_joint.alphabet;
  if (u_vars.empty() || x_vars.empty())
    throw std::invalid_argument("conditional_maxent: index lists must be nonempty");
  std::vector<char> seen(a.num_variables(), 0);
  for (const auto* vars : {&u_vars, &x_vars})
    for (int v : *vars) {
      if (v < 0 || v >= a.num_variables() || seen[v])
        throw std::invalid_argument(
            "conditional_maxent: index lists must partition the variables");
      seen[v] = 1;
    }
  for (char s : seen)
    if (!s)
      throw std::invalid_argument(
          "conditional_maxent: index lists must partition the variables");

  std::vector<int> xs = x_vars;
  std::sort(xs.begin(), xs.end());
  const SubsetConstraint* pin = nullptr;
  for (const auto& con : cs_joint.constraints)
    if (std::includes(con.subset.begin(), con.subset.end(), xs.begin(), xs.end())) {
      pin = &con;
      break;
    }
  if (!pin)
    throw std::invalid_argument(
        "conditional_maxent: no constraint pins the joint over x_vars");
  std::vector<int> where;
  for (std::size_t k = 0; k < pin->subset.size(); ++k)
    if (std::binary_search(xs.begin(), xs.end(), pin->subset[k]))
      where.push_back(static_cast<int>(k));
  const double hx = entropy_bits(marginalize(pin->target, where));

  MaxentResult res = maxent(cs_joint, opts);
  if (res.status != MaxentStatus::infeasible_detected) res.entropy_bits -= hx;
  return res;
}

}  // namespace subsetcov
