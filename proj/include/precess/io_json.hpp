#pragma once

#include <json.hpp>

#include "precess/probspace.hpp"
#include "precess/protocol.hpp"

namespace precess {

using json = nlohmann::json;

// Matrix form: {"dim": d, "re": [[...]], "im": [[...]]}
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

// Vector form: {"re": [...], "im": [...]}
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

// {"family":"four_level","x_plus":..,"x_minus":..} | {"family":"spin","j":..}
// | {"family":"clock","N":..,"l":..[,"x_plus","x_minus"]}
// | {"family":"raw","X":mat,"Y":mat,"H":mat[,"omega"]} or {"family":"raw",...,"U":mat}
json family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const json& j);

json score_report_to_json(const ScoreReport& r);

}  // namespace precess
