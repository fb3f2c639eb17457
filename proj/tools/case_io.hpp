#pragma once

// JSON case files and reports for the lcachar command line tool.

#include <string>
#include <vector>

#include <json.hpp>

#include "lca/structure.hpp"

namespace lca::cli {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

/// A path, "-" for standard input, or an inline JSON literal starting with '{'.
Json load_input(const std::string& source);

FiniteAbelianGroup parse_group(const Json& j);
XAutomorphism parse_alpha(const Json& j, const AmbientGroup& group);
/// {"terms":[...]} or the Theta shorthand {"theta":{...}}.
AtomicSignedMeasure parse_measure(const Json& j, const AmbientGroup& group);
ThetaParams parse_theta(const Json& j);
XPoint parse_point(const Json& j, const AmbientGroup& group);
/// {"weights":[[a,b],...]} indexed by element, or a finite measure.
std::vector<Z2Weights> parse_weights(const Json& j, const AmbientGroup& group);
GenerateSpec parse_generate_spec(const Json& j);

OrderedJson to_json(const FiniteAbelianGroup& group);
OrderedJson to_json(const GroupElement& g);
OrderedJson to_json(const XPoint& x);
OrderedJson to_json(const XAutomorphism& alpha);
OrderedJson to_json(const AtomicSignedMeasure& mu);
OrderedJson to_json(const ThetaParams& p);

/// Pretty printed, doubles with 17 significant digits, non-finite values as null.
std::string dump(const OrderedJson& j);

/// Writes to a sibling temporary file and renames it over the target.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace lca::cli
