#include "subsetcov/instance_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "subsetcov/pmf.hpp"

namespace subsetcov {
namespace {

using Json = nlohmann::ordered_json;

// Built-in instances. The same bytes ship as data/<name>.json, so keep the
// literals and the files in lockstep.
constexpr const char kTheorem2Json[] = R"json({
  "alphabet": [2, 2, 2, 2],
  "marginals": [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5], [0.75, 0.25]],
  "constraints": [
    {"subset": [0, 1], "pmf": [0.25, 0.25, 0.25, 0.25]},
    {"subset": [0, 2], "pmf": [0.25, 0.25, 0.25, 0.25]},
    {"subset": [1, 2], "pmf": [0.25, 0.25, 0.25, 0.25]},
    {"subset": [0, 3], "pmf": [0.5, 0.0, 0.25, 0.25]},
    {"subset": [1, 3], "pmf": [0.5, 0.0, 0.25, 0.25]},
    {"subset": [2, 3], "pmf": [0.5, 0.0, 0.25, 0.25]}
  ]
}
)json";

constexpr const char kPairCoveringJson[] = R"json({
  "alphabet": [2, 2],
  "marginals": [[0.5, 0.5], [0.5, 0.5]],
  "constraints": [
    {"subset": [0, 1], "pmf": [0.5, 0.0, 0.0, 0.5]}
  ]
}
)json";

Json parse_json(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string(what) + ": malformed JSON: " + e.what());
  }
}

const Json& require_field(const Json& j, const char* key, const char* what) {
  if (!j.is_object())
    throw std::invalid_argument(std::string(what) + ": top-level JSON object expected");
  auto it = j.find(key);
  if (it == j.end())
    throw std::invalid_argument(std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

std::vector<int> int_list(const Json& j, const char* what, const char* field) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(what) + ": \"" + field +
                                "\" must be an array of integers");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer())
      throw std::invalid_argument(std::string(what) + ": \"" + field +
                                  "\" must be an array of integers");
    out.push_back(v.get<int>());
  }
  return out;
}

std::vector<double> double_list(const Json& j, const char* what, const char* field) {
  if (!j.is_array())
    throw std::invalid_argument(std::string(what) + ": \"" + field +
                                "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number())
      throw std::invalid_argument(std::string(what) + ": \"" + field +
                                  "\" must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error(std::string(what) + ": cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Shared by parse_instance and the source part of parse_gw_instance.
ConstraintSystem system_from_json(const Json& j, const char* what) {
  std::vector<int> sizes = int_list(require_field(j, "alphabet", what), what, "alphabet");
  Alphabet a = make_alphabet(sizes);

  const Json& jm = require_field(j, "marginals", what);
  if (!jm.is_array() || jm.size() != sizes.size())
    throw std::invalid_argument(std::string(what) +
                                ": \"marginals\" must list one PMF per variable");
  std::vector<JointPMF> marg;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    marg.push_back(make_joint(make_alphabet({sizes[i]}),
                              double_list(jm[i], what, "marginals"), true));

  const Json& jc = require_field(j, "constraints", what);
  if (!jc.is_array())
    throw std::invalid_argument(std::string(what) + ": \"constraints\" must be an array");
  std::vector<SubsetConstraint> cons;
  for (const auto& item : jc) {
    if (!item.is_object())
      throw std::invalid_argument(std::string(what) +
                                  ": each constraint must be an object");
    std::vector<int> subset =
        int_list(require_field(item, "subset", what), what, "subset");
    std::vector<int> sub_sizes;
    for (int v : subset) {
      if (v < 0 || v >= a.num_variables())
        throw std::invalid_argument(std::string(what) +
                                    ": constraint subset index out of range");
      sub_sizes.push_back(sizes[static_cast<std::size_t>(v)]);
    }
    JointPMF target = make_joint(make_alphabet(sub_sizes),
                                 double_list(require_field(item, "pmf", what), what, "pmf"),
                                 true);
    cons.push_back({std::move(subset), std::move(target)});
  }
  return make_constraint_system(std::move(a), std::move(marg), std::move(cons));
}

}  // namespace

ConstraintSystem parse_instance(const std::string& json_text) {
  return system_from_json(parse_json(json_text, "instance"), "instance");
}

ConstraintSystem load_instance(const std::string& path) {
  return parse_instance(read_file(path, "instance"));
}

std::string instance_to_json(const ConstraintSystem& cs) {
  Json j;
  j["alphabet"] = cs.alphabet.sizes;
  Json marg = Json::array();
  for (const auto& m : cs.marginals) marg.push_back(m.probs);
  j["marginals"] = std::move(marg);
  Json cons = Json::array();
  for (const auto& con : cs.constraints) {
    Json item;
    item["subset"] = con.subset;
    item["pmf"] = con.target.probs;
    cons.push_back(std::move(item));
  }
  j["constraints"] = std::move(cons);
  return j.dump(2);
}

JointPMF parse_distribution(const std::string& json_text) {
  const char* what = "distribution";
  Json j = parse_json(json_text, what);
  Alphabet a = make_alphabet(int_list(require_field(j, "alphabet", what), what, "alphabet"));
  return make_joint(std::move(a),
                    double_list(require_field(j, "pmf", what), what, "pmf"), true);
}

JointPMF load_distribution(const std::string& path) {
  return parse_distribution(read_file(path, "distribution"));
}

std::string distribution_to_json(const JointPMF& p) {
  Json j;
  j["alphabet"] = p.alphabet.sizes;
  j["pmf"] = p.probs;
  return j.dump(2);
}

GWInstance parse_gw_instance(const std::string& json_text) {
  const char* what = "gray-wyner instance";
  Json j = parse_json(json_text, what);
  ConstraintSystem src = system_from_json(j, what);
  int n = src.alphabet.num_variables();
  if (n != 3)
    throw std::invalid_argument(std::string(what) +
                                ": source must have exactly three variables");

  std::vector<int> full(static_cast<std::size_t>(n));
  std::iota(full.begin(), full.end(), 0);
  const JointPMF* source = nullptr;
  for (const auto& con : src.constraints)
    if (con.subset == full) {
      source = &con.target;
      break;
    }
  if (source == nullptr)
    throw std::invalid_argument(std::string(what) +
                                ": needs a constraint over all source variables "
                                "(its pmf is the source joint)");

  std::vector<int> u_sizes =
      int_list(require_field(j, "u_alphabet", what), what, "u_alphabet");
  if (u_sizes.size() != 4)
    throw std::invalid_argument(std::string(what) +
                                ": \"u_alphabet\" must list exactly four sizes");
  std::vector<int> seven = u_sizes;
  seven.insert(seven.end(), src.alphabet.sizes.begin(), src.alphabet.sizes.end());
  Alphabet all = make_alphabet(seven);
  std::size_t x_cells = src.alphabet.num_cells();
  std::size_t u_cells = all.num_cells() / x_cells;

  std::vector<double> chan =
      double_list(require_field(j, "channel", what), what, "channel");
  if (chan.size() != u_cells * x_cells)
    throw std::invalid_argument(std::string(what) +
                                ": \"channel\" must hold one block of U-cells "
                                "per X-cell (row-major)");
  for (std::size_t x = 0; x < x_cells; ++x) {
    double row = 0.0;
    for (std::size_t u = 0; u < u_cells; ++u) {
      double v = chan[x * u_cells + u];
      if (v < 0.0)
        throw std::invalid_argument(std::string(what) + ": negative channel entry");
      row += v;
    }
    if (row <= 0.0)
      throw std::invalid_argument(std::string(what) +
                                  ": channel row for an X-cell has zero mass");
    for (std::size_t u = 0; u < u_cells; ++u) chan[x * u_cells + u] /= row;
  }

  // Variable order (U123, U12, U13, U23, X1, X2, X3): the U-block is the slow
  // axis, so rank = u_rank * x_cells + x_rank.
  std::vector<double> probs(u_cells * x_cells, 0.0);
  for (std::size_t u = 0; u < u_cells; ++u)
    for (std::size_t x = 0; x < x_cells; ++x)
      probs[u * x_cells + x] = source->probs[x] * chan[x * u_cells + u];
  JointPMF joint = make_joint(std::move(all), std::move(probs), true);

  JointPMF back = marginalize(joint, {kX1, kX2, kX3});
  for (std::size_t x = 0; x < x_cells; ++x)
    if (std::abs(back.probs[x] - source->probs[x]) > 1e-9)
      throw std::invalid_argument(std::string(what) +
                                  ": joint does not reproduce the source marginal");
  return make_gw_instance(std::move(joint));
}

GWInstance load_gw_instance(const std::string& path) {
  return parse_gw_instance(read_file(path, "gray-wyner instance"));
}

std::optional<std::string> builtin_instance_json(const std::string& name) {
  if (name == "theorem2") return std::string(kTheorem2Json);
  if (name == "pair-covering") return std::string(kPairCoveringJson);
  return std::nullopt;
}

std::string resolve_instance_text(const std::string& path_or_name) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_or_name, ec))
    return read_file(path_or_name, "instance");
  if (auto text = builtin_instance_json(path_or_name)) return *text;
  throw std::invalid_argument("instance: \"" + path_or_name +
                              "\" is neither a readable file nor a built-in name "
                              "(theorem2, pair-covering)");
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace subsetcov
