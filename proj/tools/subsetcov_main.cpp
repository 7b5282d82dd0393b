// Command-line front end: maximum-entropy solves, feasibility certificates,
// rate-region tables and membership queries, covering simulations, the
// typicality-exponent probe, the Gray-Wyner region, and the packaged
// counterexample reproduction.
//
// Exit codes: 0 success, 1 reproduction-check failure, 2 usage or malformed
// input, 3 infeasible when feasibility was expected, 4 numerical failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subsetcov/covering.hpp"
#include "subsetcov/gray_wyner.hpp"
#include "subsetcov/instance_io.hpp"
#include "subsetcov/maxent.hpp"
#include "subsetcov/pmf.hpp"
#include "subsetcov/regions.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace subsetcov;

struct CommonOpts {
  std::string instance;
  std::string out;     // empty = stdout
  std::string format;  // empty = command default
  std::uint64_t seed = 0;
};

// Output sink: stdout, or --out file plus a run manifest alongside it.
struct Emitter {
  std::string command;
  std::vector<std::string> arguments;  // argv[1..]
  const CommonOpts* common = nullptr;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  int write(const std::string& content) const {
    if (common->out.empty()) {
      std::cout << content;
      return 0;
    }
    {
      std::ofstream f(common->out, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot write " << common->out << '\n';
        return 4;
      }
      f << content;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                started)
                      .count();
    Json m;
    m["command"] = command;
    m["arguments"] = arguments;
    m["seed"] = common->seed;
    m["version"] = kVersion;
    m["duration_seconds"] = secs;
    m["digest"] = fnv1a_hex(content);
    std::ofstream mf(common->out + ".manifest.json", std::ios::binary);
    if (!mf) {
      std::cerr << "error: cannot write " << common->out << ".manifest.json\n";
      return 4;
    }
    mf << m.dump(2) << '\n';
    return 0;
  }
};

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bits(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string csv_cell(const Json& v) {
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_number_float()) return fmt_double(v.get<double>());
  return csv_escape(v.dump());
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Json>> rows;
};

std::string render_table(const Table& t, const std::string& format) {
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& row : t.rows) {
      Json obj;
      for (std::size_t k = 0; k < t.header.size(); ++k) obj[t.header[k]] = row[k];
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t k = 0; k < t.header.size(); ++k) {
    if (k) out += ',';
    out += t.header[k];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      out += csv_cell(row[k]);
    }
    out += '\n';
  }
  return out;
}

std::string render_report(const Json& rep, const std::string& format) {
  if (format == "csv") {
    std::string out = "key,value\n";
    for (auto it = rep.begin(); it != rep.end(); ++it)
      out += it.key() + ',' + csv_cell(it.value()) + '\n';
    return out;
  }
  return rep.dump(2) + "\n";
}

std::string pick_format(const CommonOpts& c, const char* dflt) {
  return c.format.empty() ? dflt : c.format;
}

Json distribution_json(const JointPMF& p) {
  Json j;
  j["alphabet"] = p.alphabet.sizes;
  j["pmf"] = p.probs;
  return j;
}

const char* status_name(MaxentStatus s) {
  switch (s) {
    case MaxentStatus::converged: return "converged";
    case MaxentStatus::iteration_limit: return "iteration-limit";
    case MaxentStatus::infeasible_detected: return "infeasible-detected";
  }
  return "unknown";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::inside: return "inside";
    case Verdict::outside: return "outside";
    case Verdict::boundary_indeterminate: return "boundary-indeterminate";
  }
  return "unknown";
}

std::vector<int> mask_to_subset(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (mask & (1u << i)) out.push_back(i);
  return out;
}

ConstraintSystem load_system(const CommonOpts& c) {
  return parse_instance(resolve_instance_text(c.instance));
}

// ---------------------------------------------------------------- commands --

int run_maxent(const CommonOpts& c, std::vector<int> subset, bool dump_joint,
               const Emitter& emit) {
  ConstraintSystem cs = load_system(c);
  if (!subset.empty()) {
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    for (int v : subset)
      if (v < 0 || v >= cs.alphabet.num_variables())
        throw std::invalid_argument("maxent: --subset index out of range");
    cs = restricted_system(cs, subset);
  }
  MaxentResult res = maxent(cs);

  Json rep;
  rep["command"] = "maxent";
  rep["instance"] = c.instance;
  if (!subset.empty()) rep["subset"] = subset;
  rep["entropy_bits"] = res.entropy_bits;
  rep["status"] = status_name(res.status);
  rep["iterations"] = res.iterations;
  rep["max_residual"] = res.residual;
  if (dump_joint) rep["joint"] = distribution_json(res.distribution);
  int rc = emit.write(render_report(rep, pick_format(c, "json")));
  if (rc != 0) return rc;
  if (res.status == MaxentStatus::infeasible_detected) return 3;
  if (res.status == MaxentStatus::iteration_limit) return 4;
  return 0;
}

int run_feasibility(const CommonOpts& c, const Emitter& emit) {
  ConstraintSystem cs = load_system(c);
  FeasibilityCertificate cert = feasibility(cs);
  Json rep;
  rep["command"] = "feasibility";
  rep["instance"] = c.instance;
  rep["verdict"] = cert.feasible ? "FEASIBLE" : "INFEASIBLE";
  rep["max_residual"] = cert.max_residual;
  rep["phase1_objective"] = cert.phase1_objective;
  if (cert.feasible) rep["witness"] = distribution_json(cert.witness);
  int rc = emit.write(render_report(rep, pick_format(c, "json")));
  if (rc != 0) return rc;
  return cert.feasible ? 0 : 3;
}

int run_region(const CommonOpts& c, const std::string& which,
               const std::string& ptilde, const Emitter& emit) {
  ConstraintSystem cs = load_system(c);
  InequalitySystem sys;
  if (which == "rstar") {
    sys = build_rstar(cs);
  } else {
    if (ptilde.empty())
      throw std::invalid_argument("region: --which ra requires --ptilde");
    JointPMF p = load_distribution(ptilde);
    if (p.alphabet.sizes != cs.alphabet.sizes)
      throw std::invalid_argument("region: --ptilde alphabet does not match the instance");
    for (const auto& con : cs.constraints) {
      JointPMF m = marginalize(p, con.subset);
      for (std::size_t k = 0; k < m.probs.size(); ++k)
        if (std::fabs(m.probs[k] - con.target.probs[k]) > kConsistencyTolerance)
          throw std::invalid_argument(
              "region: --ptilde does not satisfy the instance constraints");
    }
    sys = build_ra_fixed(p);
  }
  Table t;
  t.header = {"subset-bitmask", "bound-bits"};
  for (const auto& b : sys.bounds)
    t.rows.push_back({Json(b.subset_mask), Json(b.bound_bits)});
  return emit.write(render_table(t, pick_format(c, "csv")));
}

int run_member(const CommonOpts& c, const std::vector<double>& point,
               const std::string& region, const Emitter& emit) {
  ConstraintSystem cs = load_system(c);
  Json rep;
  rep["command"] = "member";
  rep["instance"] = c.instance;
  rep["region"] = region;
  rep["point"] = point;
  if (region == "rstar") {
    MembershipVerdict v = point_in_system(point, build_rstar(cs));
    rep["verdict"] = verdict_name(v.status);
    rep["margin_bits"] = v.margin;
    rep["argmin_mask"] = v.argmin_mask;
    rep["argmin_subset"] = mask_to_subset(v.argmin_mask);
  } else {
    RaUnionResult res = point_in_ra_union(point, cs);
    rep["verdict"] = verdict_name(res.verdict.status);
    rep["margin_bits"] = res.verdict.margin;
    rep["argmin_mask"] = res.verdict.argmin_mask;
    rep["argmin_subset"] = mask_to_subset(res.verdict.argmin_mask);
    if (res.verdict.witness) rep["witness"] = distribution_json(*res.verdict.witness);
  }
  return emit.write(render_report(rep, pick_format(c, "json")));
}

int run_cover(const CommonOpts& c, const std::vector<double>& rates, int n,
              double eps, int trials, const Emitter& emit) {
  ConstraintSystem cs = load_system(c);
  CoverReport report = estimate_cover_prob(cs, rates, {n, eps}, trials, c.seed);
  Json rep;
  rep["command"] = "cover";
  rep["instance"] = c.instance;
  rep["rates"] = rates;
  rep["n"] = n;
  rep["epsilon"] = eps;
  rep["trials"] = report.trials;
  rep["successes"] = report.successes;
  rep["success_fraction"] = report.success_fraction;
  rep["wilson_low"] = report.wilson_low;
  rep["wilson_high"] = report.wilson_high;
  rep["searched_tuples_mean"] = report.searched_tuples_mean;
  rep["seed"] = report.seed;
  std::vector<int> found(report.per_trial_found.begin(), report.per_trial_found.end());
  rep["per_trial_found"] = found;
  return emit.write(render_report(rep, pick_format(c, "json")));
}

int run_exponent(const CommonOpts& c, const std::string& mode, int nmin, int nmax,
                 double eps, std::uint64_t budget, bool seed_given,
                 const Emitter& emit) {
  ConstraintSystem cs = load_system(c);
  ExponentOptions eo;
  eo.n_min = nmin;
  eo.n_max = nmax;
  eo.epsilon = eps;
  if (mode == "montecarlo") {
    if (!seed_given)
      throw std::invalid_argument("exponent: --mode montecarlo requires --seed");
    eo.mode = ExponentMode::montecarlo;
    eo.budget = budget;
    eo.seed = c.seed;
  } else {
    eo.mode = ExponentMode::exact;
  }
  std::vector<ExponentRow> rows = exponent_probe(cs, eo);
  Table t;
  t.header = {"n", "exponent", "reference"};
  for (const auto& r : rows)
    t.rows.push_back({Json(r.n), Json(r.exponent), Json(r.reference)});
  return emit.write(render_table(t, pick_format(c, "csv")));
}

int run_gray_wyner(const CommonOpts& c, const Emitter& emit) {
  GWInstance inst = parse_gw_instance(resolve_instance_text(c.instance));
  GWEvaluation ev = evaluate_gw_region(inst);
  Table t;
  t.header = {"label", "bound-bits"};
  for (const auto& b : ev.region.bounds)
    t.rows.push_back({Json(b.label), Json(b.bound_bits)});
  return emit.write(render_table(t, pick_format(c, "csv")));
}

int run_repro(const Emitter& emit) {
  ConstraintSystem cs = parse_instance(*builtin_instance_json("theorem2"));
  std::ostringstream out;
  out << "reproduction: pairwise-constrained four-bit system and corner point A\n";

  out << "\n(a) constraints\n";
  for (const auto& con : cs.constraints) {
    out << "    P(X" << con.subset[0] + 1 << ",X" << con.subset[1] + 1 << ") = (";
    for (std::size_t k = 0; k < con.target.probs.size(); ++k)
      out << (k ? ", " : "") << con.target.probs[k];
    out << ")\n";
  }

  InequalitySystem rstar = build_rstar(cs);
  std::vector<double> hx;
  for (const auto& m : cs.marginals) hx.push_back(entropy_bits(m));
  auto bound_of = [&](std::uint32_t mask) {
    for (const auto& b : rstar.bounds)
      if (b.subset_mask == mask) return b.bound_bits;
    throw std::runtime_error("repro-theorem2: missing bound row");
  };

  out << "\n(b) maximum entropies H*({X}_J), bits\n";
  for (std::uint32_t mask = 1; mask < 16; ++mask) {
    double sum_h = 0.0;
    out << "    J = {";
    bool first = true;
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) {
        out << (first ? "" : ",") << "X" << i + 1;
        sum_h += hx[static_cast<std::size_t>(i)];
        first = false;
      }
    out << "}: H* = " << fmt_bits(sum_h - bound_of(mask)) << "\n";
  }

  out << "\n(c) rewritten region\n";
  for (int i = 0; i < 3; ++i)
    out << "    R" << i + 1 << " + R4 >= "
        << fmt_bits(bound_of((1u << i) | (1u << 3))) << "\n";
  double c_full = bound_of(15);
  out << "    R1 + R2 + R3 + R4 >= " << fmt_bits(c_full) << "\n";
  out << "    (binary entropy at 1/4: " << fmt_bits(binary_entropy(0.25))
      << "; pair bound reference Hb(1/4) - 1/2)\n";

  RatePoint corner = {0.0, 0.0, 0.0, c_full};
  out << "\n(d) corner point\n    A = (0, 0, 0, " << fmt_bits(c_full) << ")\n";

  MembershipVerdict in_star = point_in_system(corner, rstar);
  RaUnionResult in_union = point_in_ra_union(corner, cs);
  bool ok_star = in_star.status == Verdict::inside;
  bool ok_union = in_union.verdict.status == Verdict::outside;
  out << "\n(e) membership\n";
  out << "    A in R_a*      : " << verdict_name(in_star.status)
      << " (margin " << fmt_bits(in_star.margin) << " bits)\n";
  out << "    A in R_a union : " << verdict_name(in_union.verdict.status)
      << " (margin " << fmt_bits(in_union.verdict.margin) << " bits)\n";

  ZeroRateCertificate cert = zero_rate_certificate(cs, {0, 1, 2});
  bool ok_cert = !cert.feasible;
  out << "\n(f) zero-rate certificate for {X1,X2,X3}\n    "
      << (cert.feasible ? "FEASIBLE (unexpected)" : "INFEASIBLE")
      << " (phase-1 objective " << fmt_double(cert.phase1_objective) << ")\n";

  out << "\nsummary: " << (ok_star && ok_union && ok_cert ? "PASS" : "FAIL")
      << "\n";
  int rc = emit.write(out.str());
  if (rc != 0) return rc;
  if (!ok_star) {
    std::cerr << "repro-theorem2: step (e) failed: A is not inside R_a*\n";
    return 1;
  }
  if (!ok_union) {
    std::cerr << "repro-theorem2: step (e) failed: A was not rejected from the "
                 "R_a union\n";
    return 1;
  }
  if (!ok_cert) {
    std::cerr << "repro-theorem2: step (f) failed: zero-rate certificate came "
                 "back feasible\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subset-marginal maximum-entropy regions, covering simulations, "
               "and the Gray-Wyner region"};
  app.require_subcommand(1);

  std::vector<std::string> argv_tail;
  for (int i = 1; i < argc; ++i) argv_tail.emplace_back(argv[i]);

  int rc = 0;
  auto attach = [&](CLI::App* sub, CommonOpts& c, bool with_instance,
                    bool seed_required = false) {
    if (with_instance)
      sub->add_option("--instance", c.instance,
                      "instance file, or built-in name (theorem2, pair-covering)")
          ->required();
    sub->add_option("--out", c.out, "write output to this file plus a .manifest.json");
    sub->add_option("--format", c.format, "output format override")
        ->check(CLI::IsMember({"json", "csv"}));
    auto* seed = sub->add_option("--seed", c.seed, "master seed");
    if (seed_required) seed->required();
    return seed;
  };
  auto emitter = [&](const char* name, const CommonOpts& c) {
    Emitter e;
    e.command = name;
    e.arguments = argv_tail;
    e.common = &c;
    return e;
  };

  // maxent
  static CommonOpts c_maxent;
  static std::vector<int> maxent_subset;
  static bool maxent_dump = false;
  {
    auto* sub = app.add_subcommand("maxent",
                                   "maximum-entropy joint under the instance constraints");
    attach(sub, c_maxent, true);
    sub->add_option("--subset", maxent_subset,
                    "restrict to these variables (comma-separated indices)")
        ->delimiter(',');
    sub->add_flag("--dump-joint", maxent_dump, "include the maximizing tensor");
    sub->callback([&] {
      rc = run_maxent(c_maxent, maxent_subset, maxent_dump,
                      emitter("maxent", c_maxent));
    });
  }

  // feasibility
  static CommonOpts c_feas;
  {
    auto* sub = app.add_subcommand("feasibility",
                                   "LP feasibility certificate for the constraint polytope");
    attach(sub, c_feas, true);
    sub->callback([&] { rc = run_feasibility(c_feas, emitter("feasibility", c_feas)); });
  }

  // region
  static CommonOpts c_region;
  static std::string region_which;
  static std::string region_ptilde;
  {
    auto* sub = app.add_subcommand("region", "emit a rate-region inequality table");
    attach(sub, c_region, true);
    sub->add_option("--which", region_which, "rstar or ra")
        ->required()
        ->check(CLI::IsMember({"rstar", "ra"}));
    sub->add_option("--ptilde", region_ptilde,
                    "distribution file fixing the covering joint (required for ra)");
    sub->callback([&] {
      rc = run_region(c_region, region_which, region_ptilde,
                      emitter("region", c_region));
    });
  }

  // member
  static CommonOpts c_member;
  static std::vector<double> member_point;
  static std::string member_region;
  {
    auto* sub = app.add_subcommand("member", "point membership for a rate region");
    attach(sub, c_member, true);
    sub->add_option("--point", member_point, "rate point (comma-separated bits)")
        ->required()
        ->delimiter(',');
    sub->add_option("--region", member_region, "rstar or ra-union")
        ->required()
        ->check(CLI::IsMember({"rstar", "ra-union"}));
    sub->callback([&] {
      rc = run_member(c_member, member_point, member_region,
                      emitter("member", c_member));
    });
  }

  // cover
  static CommonOpts c_cover;
  static std::vector<double> cover_rates;
  static int cover_n = 8;
  static double cover_eps = 0.1;
  static int cover_trials = 200;
  {
    auto* sub = app.add_subcommand("cover",
                                   "random-coding covering probability estimate");
    attach(sub, c_cover, true, /*seed_required=*/true);
    sub->add_option("--rates", cover_rates, "per-variable rates (comma-separated bits)")
        ->required()
        ->delimiter(',');
    sub->add_option("--n", cover_n, "block length")->required();
    sub->add_option("--eps", cover_eps, "typicality slack");
    sub->add_option("--trials", cover_trials, "independent trials");
    sub->callback([&] {
      rc = run_cover(c_cover, cover_rates, cover_n, cover_eps, cover_trials,
                     emitter("cover", c_cover));
    });
  }

  // exponent
  static CommonOpts c_exp;
  static std::string exp_mode = "exact";
  static int exp_nmin = 1;
  static int exp_nmax = 1;
  static double exp_eps = 0.1;
  static std::uint64_t exp_budget = 10000;
  static CLI::Option* exp_seed_opt = nullptr;
  {
    auto* sub = app.add_subcommand("exponent", "typicality-exponent probe table");
    exp_seed_opt = attach(sub, c_exp, true);
    sub->add_option("--mode", exp_mode, "exact or montecarlo")
        ->required()
        ->check(CLI::IsMember({"exact", "montecarlo"}));
    sub->add_option("--nmin", exp_nmin, "smallest block length");
    sub->add_option("--nmax", exp_nmax, "largest block length")->required();
    sub->add_option("--eps", exp_eps, "typicality slack");
    sub->add_option("--budget", exp_budget, "Monte Carlo trials per n");
    sub->callback([&] {
      rc = run_exponent(c_exp, exp_mode, exp_nmin, exp_nmax, exp_eps, exp_budget,
                        exp_seed_opt->count() > 0, emitter("exponent", c_exp));
    });
  }

  // gray-wyner
  static CommonOpts c_gw;
  {
    auto* sub = app.add_subcommand("gray-wyner",
                                   "three-user Gray-Wyner region bound table");
    attach(sub, c_gw, true);
    sub->callback([&] { rc = run_gray_wyner(c_gw, emitter("gray-wyner", c_gw)); });
  }

  // repro-theorem2
  static CommonOpts c_repro;
  {
    auto* sub = app.add_subcommand(
        "repro-theorem2", "run the packaged counterexample end to end");
    attach(sub, c_repro, false);
    sub->callback([&] { rc = run_repro(emitter("repro-theorem2", c_repro)); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return rc;
}
