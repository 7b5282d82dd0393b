#pragma once

#include <optional>
#include <string>

#include "subsetcov/gray_wyner.hpp"
#include "subsetcov/pmf.hpp"

// JSON (de)serialization of instances and distributions, plus the built-in
// canonical instances.

namespace subsetcov {

inline constexpr const char* kVersion = "1.0.0";

// Instance schema: {"alphabet": [sizes...], "marginals": [[...], ...],
//   "constraints": [{"subset": [i, ...], "pmf": [row-major...]}, ...]}.
// PMFs are normalized on load, then the 1e-12 mass invariant is enforced.
ConstraintSystem parse_instance(const std::string& json_text);
ConstraintSystem load_instance(const std::string& path);
std::string instance_to_json(const ConstraintSystem& cs);

// Distribution files: {"alphabet": [...], "pmf": [row-major...]}.
JointPMF parse_distribution(const std::string& json_text);
JointPMF load_distribution(const std::string& path);
std::string distribution_to_json(const JointPMF& p);

// Gray-Wyner schema: standard instance fields describing the X-source (the
// constraint whose subset is all X variables is the source joint), plus
// "u_alphabet": [|U123|,|U12|,|U13|,|U23|] and "channel": row-major
// P(u | x), one block of U-cells per X-cell.
GWInstance parse_gw_instance(const std::string& json_text);
GWInstance load_gw_instance(const std::string& path);

// Built-in canonical instances: "theorem2" (four binary variables, six
// pairwise constraints) and "pair-covering" (two fair bits, X_2 = X_1).
std::optional<std::string> builtin_instance_json(const std::string& name);

// Path if the file exists, otherwise built-in text by name; throws when
// neither resolves.
std::string resolve_instance_text(const std::string& path_or_name);

// FNV-1a 64-bit digest, hex-encoded; used for output manifests.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace subsetcov
