// JSON schemas: equations, transforms, family parameter sets, split results
// and solutions.
#pragma once

#include "abel/reduce.hpp"
#include "abel/solve.hpp"

#include <json.hpp>

namespace abel {

using nlohmann::json;

json equation_to_json(const RationalODE& e);
RationalODE equation_from_json(const json& j);

json transform_to_json(const ChangeOfVariables& t);
/// Accepts a transform object or an array (composition).
ChangeOfVariables transform_from_json(const json& j);

FamilyParams family_params_from_json(const std::string& family, const json& set);
json family_params_to_json(const FamilyParams& p);

json split_result_to_json(const SplitResult& r);
json solution_to_json(const FirstIntegral& fi);
json shape_report_to_json(const ShapeReport& r);

} // namespace abel
