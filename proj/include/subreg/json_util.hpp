#pragma once

#include "subreg/space.hpp"

#include <json.hpp>

#include <string>

namespace subreg {

using Json = nlohmann::json;

/// Full-precision scientific notation (17 significant digits); bit-faithful
/// for downstream comparisons.
std::string format_full(double v);

/// Doubles as JSON numbers, with the infinities spelled "inf"/"-inf"
/// (JSON has no literal for them and they must stay explicit).
Json json_number(double v);
double number_from_json(const Json& j, const char* what);

Json json_vec(const Vec& v);
Vec vec_from_json(const Json& j, const char* what);

NormKind norm_from_string(const std::string& s);
std::string norm_to_string(NormKind norm);

/// Strict-schema helper: rejects keys outside `allowed`.
void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const char* what);

}  // namespace subreg
