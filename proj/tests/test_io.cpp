#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "subsetcov/gray_wyner.hpp"
#include "subsetcov/instance_io.hpp"
#include "subsetcov/regions.hpp"

using namespace subsetcov;

namespace {

void check_systems_close(const ConstraintSystem& got, const ConstraintSystem& want,
                         double tol) {
  REQUIRE(got.alphabet.sizes == want.alphabet.sizes);
  REQUIRE(got.marginals.size() == want.marginals.size());
  for (std::size_t i = 0; i < want.marginals.size(); ++i) {
    REQUIRE(got.marginals[i].probs.size() == want.marginals[i].probs.size());
    for (std::size_t c = 0; c < want.marginals[i].probs.size(); ++c)
      CHECK(std::fabs(got.marginals[i].probs[c] - want.marginals[i].probs[c]) <= tol);
  }
  REQUIRE(got.constraints.size() == want.constraints.size());
  for (std::size_t k = 0; k < want.constraints.size(); ++k) {
    CHECK(got.constraints[k].subset == want.constraints[k].subset);
    REQUIRE(got.constraints[k].target.probs.size() ==
            want.constraints[k].target.probs.size());
    for (std::size_t c = 0; c < want.constraints[k].target.probs.size(); ++c)
      CHECK(std::fabs(got.constraints[k].target.probs[c] -
                      want.constraints[k].target.probs[c]) <= tol);
  }
}

std::filesystem::path repo_data_dir() {
  return std::filesystem::path(__FILE__).parent_path().parent_path() / "data";
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

// The xor/and test channel from the region tests, this time entering through
// the JSON door: three iid fair bits, U123 = X1 xor X2, U12 = X1 and X2.
const char* xor_and_gw_json() {
  return R"({
    "alphabet": [2, 2, 2],
    "marginals": [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
    "constraints": [
      {"subset": [0, 1, 2],
       "pmf": [0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125, 0.125]}
    ],
    "u_alphabet": [2, 2, 1, 1],
    "channel": [1, 0, 0, 0,  1, 0, 0, 0,
                0, 0, 1, 0,  0, 0, 1, 0,
                0, 0, 1, 0,  0, 0, 1, 0,
                0, 1, 0, 0,  0, 1, 0, 0]
  })";
}

}  // namespace

TEST_CASE("built-in instances parse to the canonical systems") {
  SUBCASE("theorem2") {
    auto text = builtin_instance_json("theorem2");
    REQUIRE(text.has_value());
    check_systems_close(parse_instance(*text), oracle::theorem2_system(), 1e-12);
  }
  SUBCASE("pair-covering") {
    auto text = builtin_instance_json("pair-covering");
    REQUIRE(text.has_value());
    check_systems_close(parse_instance(*text), oracle::pair_system(), 1e-12);
  }
  SUBCASE("unknown names resolve to nothing") {
    CHECK_FALSE(builtin_instance_json("three-bits").has_value());
    CHECK_FALSE(builtin_instance_json("").has_value());
  }
}

TEST_CASE("shipped data files match the embedded built-ins byte for byte") {
  CHECK(slurp(repo_data_dir() / "theorem2.json") == *builtin_instance_json("theorem2"));
  CHECK(slurp(repo_data_dir() / "pair-covering.json") ==
        *builtin_instance_json("pair-covering"));
}

TEST_CASE("instance serialization round-trips") {
  SUBCASE("canonical system") {
    ConstraintSystem cs = oracle::theorem2_system();
    check_systems_close(parse_instance(instance_to_json(cs)), cs, 1e-12);
  }
  SUBCASE("randomized systems") {
    std::mt19937 rng(20260823);
    for (int rep = 0; rep < 10; ++rep) {
      JointPMF joint = oracle::random_joint({2, 3, 2}, rng);
      ConstraintSystem cs = system_from_joint(joint, {{0, 1}, {1, 2}, {0, 2}});
      check_systems_close(parse_instance(instance_to_json(cs)), cs, 1e-12);
    }
  }
}

TEST_CASE("loaders normalize unnormalized mass") {
  ConstraintSystem cs = parse_instance(R"({
    "alphabet": [2, 2],
    "marginals": [[1, 1], [3, 1]],
    "constraints": [{"subset": [0, 1], "pmf": [3, 1, 3, 1]}]
  })");
  CHECK(cs.marginals[0].probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cs.marginals[1].probs[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(cs.constraints[0].target.probs[0] == doctest::Approx(0.375).epsilon(1e-12));

  JointPMF p = parse_distribution(R"({"alphabet": [2], "pmf": [2, 2]})");
  CHECK(p.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("schema violations raise argument errors") {
  CHECK_THROWS_AS(parse_instance("{"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_instance(R"({"marginals": [], "constraints": []})"),
                  std::invalid_argument);  // no alphabet
  CHECK_THROWS_AS(parse_instance(R"({"alphabet": [2], "constraints": []})"),
                  std::invalid_argument);  // no marginals
  CHECK_THROWS_AS(parse_instance(R"({"alphabet": [2], "marginals": [[0.5, 0.5]]})"),
                  std::invalid_argument);  // no constraints
  CHECK_THROWS_AS(parse_instance(R"({"alphabet": ["two"], "marginals": [],
                                     "constraints": []})"),
                  std::invalid_argument);  // non-integer size
  CHECK_THROWS_AS(parse_instance(R"({"alphabet": [2, 2],
                                     "marginals": [[0.5, 0.5]],
                                     "constraints": []})"),
                  std::invalid_argument);  // marginal count mismatch
  CHECK_THROWS_AS(parse_instance(R"({"alphabet": [2, 2],
                                     "marginals": [[0.5, 0.5], [0.5, 0.5]],
                                     "constraints": [{"subset": [0, 2],
                                                      "pmf": [0.25, 0.25, 0.25, 0.25]}]})"),
                  std::invalid_argument);  // subset index out of range
  CHECK_THROWS_AS(parse_instance(R"({"alphabet": [2, 2],
                                     "marginals": [[0.5, 0.5], [0.5, 0.5]],
                                     "constraints": [{"subset": [0, 1],
                                                      "pmf": [0.5, 0.5]}]})"),
                  std::invalid_argument);  // pmf length mismatch
  CHECK_THROWS_AS(parse_instance(R"({"alphabet": [2],
                                     "marginals": [[1.5, -0.5]],
                                     "constraints": []})"),
                  std::invalid_argument);  // negative mass
  CHECK_THROWS_AS(parse_distribution(R"({"alphabet": [2]})"), std::invalid_argument);
  CHECK_THROWS_AS(parse_distribution(R"({"pmf": [1.0]})"), std::invalid_argument);
}

TEST_CASE("distribution serialization round-trips") {
  JointPMF p = oracle::theorem2_unique_joint();
  JointPMF q = parse_distribution(distribution_to_json(p));
  REQUIRE(q.alphabet.sizes == p.alphabet.sizes);
  for (std::size_t c = 0; c < p.probs.size(); ++c)
    CHECK(std::fabs(q.probs[c] - p.probs[c]) <= 1e-12);
}

TEST_CASE("gray-wyner instances parse from source plus channel") {
  SUBCASE("the xor/and channel reproduces the directly built joint") {
    GWInstance inst = parse_gw_instance(xor_and_gw_json());
    Alphabet want = make_alphabet({2, 2, 1, 1, 2, 2, 2});
    REQUIRE(inst.joint.alphabet.sizes == want.sizes);
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        for (int x3 = 0; x3 < 2; ++x3) {
          std::size_t r = want.rank({x1 ^ x2, x1 & x2, 0, 0, x1, x2, x3});
          CHECK(std::fabs(inst.joint.probs[r] - 0.125) <= 1e-12);
        }
    double mass = 0.0;
    for (double v : inst.joint.probs) mass += v;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("channel rows are normalized per X-cell") {
    std::string text = xor_and_gw_json();
    // Double every entry of the first row only; loading must undo it.
    auto pos = text.find("[1, 0, 0, 0,");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "[2, 0, 0, 0,");
    GWInstance inst = parse_gw_instance(text);
    Alphabet a = inst.joint.alphabet;
    CHECK(std::fabs(inst.joint.probs[a.rank({0, 0, 0, 0, 0, 0, 0})] - 0.125) <= 1e-12);
  }

  SUBCASE("an all-zero channel row is rejected") {
    std::string text = xor_and_gw_json();
    auto pos = text.find("[1, 0, 0, 0,");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "[0, 0, 0, 0,");
    CHECK_THROWS_AS(parse_gw_instance(text), std::invalid_argument);
  }

  SUBCASE("the source joint constraint is required") {
    CHECK_THROWS_AS(parse_gw_instance(R"({
      "alphabet": [2, 2, 2],
      "marginals": [[0.5, 0.5], [0.5, 0.5], [0.5, 0.5]],
      "constraints": [{"subset": [0, 1], "pmf": [0.25, 0.25, 0.25, 0.25]}],
      "u_alphabet": [1, 1, 1, 1],
      "channel": [1, 1, 1, 1, 1, 1, 1, 1]
    })"),
                    std::invalid_argument);
  }

  SUBCASE("shape errors are rejected") {
    std::string text = xor_and_gw_json();
    auto pos = text.find("[2, 2, 1, 1]");
    REQUIRE(pos != std::string::npos);
    std::string three_u = text;
    three_u.replace(pos, 12, "[2, 2, 1]");
    CHECK_THROWS_AS(parse_gw_instance(three_u), std::invalid_argument);

    std::string short_channel = text;
    auto cpos = short_channel.find("0, 1, 0, 0]");
    REQUIRE(cpos != std::string::npos);
    short_channel.replace(cpos, 11, "0, 1]");
    CHECK_THROWS_AS(parse_gw_instance(short_channel), std::invalid_argument);
  }
}

TEST_CASE("instance text resolution prefers files, then built-ins") {
  namespace fs = std::filesystem;
  fs::path tmp = fs::temp_directory_path() / "subsetcov_io_probe.json";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << *builtin_instance_json("pair-covering");
  }
  CHECK(resolve_instance_text(tmp.string()) == *builtin_instance_json("pair-covering"));
  CHECK(resolve_instance_text("theorem2") == *builtin_instance_json("theorem2"));
  CHECK_THROWS_AS(resolve_instance_text("no-such-instance-name"),
                  std::invalid_argument);

  check_systems_close(load_instance(tmp.string()), oracle::pair_system(), 1e-12);
  CHECK_THROWS_AS(load_instance((fs::temp_directory_path() / "absent.json").string()),
                  std::runtime_error);
  fs::remove(tmp);
}

TEST_CASE("fnv1a digests match the reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("hello") == "a430d84680aabd0b");
  CHECK(fnv1a_hex("subset-marginal") == "41b5f254a515f511");
  CHECK(fnv1a_hex(std::string("\0\1", 2)) != fnv1a_hex(std::string("\1\0", 2)));
}

TEST_CASE("variable restriction matches the brute-force oracle") {
  std::mt19937 rng(77);
  for (int rep = 0; rep < 20; ++rep) {
    JointPMF joint = oracle::random_joint({2, 2, 3, 2}, rng);
    ConstraintSystem cs =
        system_from_joint(joint, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {1, 3}});
    for (const std::vector<int>& J :
         std::vector<std::vector<int>>{{0}, {1, 2}, {0, 3}, {0, 1, 3}, {0, 1, 2, 3}}) {
      ConstraintSystem got = restricted_system(cs, J);
      ConstraintSystem want = oracle::restrict_oracle(cs, J);
      check_systems_close(got, want, 1e-12);
    }
  }
}
