#pragma once

// JSON encodings shared by the CLI and the verification reports.
//
//   space:      {"d": 3, "p": 1.5, "q": 3}            ("q": "inf" when p = 1)
//   vector:     {"space": {...}, "coords": [..]}       (functionals use the same shape)
//   tuple file: [vector, ...]
//             | {"space": {...}, "vectors": [[..], ..]}
//             | [[..], ..]                             (needs an explicit p)
//   tensor:     {"order": n, "space": {...}, "coeffs": nested arrays, slot 1 outermost}

#include <optional>
#include <vector>

#include "json.hpp"
#include "ndual/functionals.hpp"
#include "ndual/nnorms.hpp"
#include "ndual/ortho.hpp"
#include "ndual/spaces.hpp"

namespace ndual::json_io {

using nlohmann::json;

json to_json(const SpaceSpec& space);
json to_json(const Vector& v);
json to_json(const DualFunctional& f);
json to_json(const MultiFunctional& f);
json to_json(std::span<const Vector> xs);
json to_json(const OrthogonalizationResult& r);
json to_json(const GahlerEstimate& e);
json to_json(const FunctionalNormEstimate& e);

// Readers throw ValueError on malformed documents; library errors
// (DimensionError, RangeError, ...) propagate unchanged.
SpaceSpec space_from_json(const json& j);
Vector vector_from_json(const json& j);
DualFunctional functional_from_json(const json& j);
MultiFunctional tensor_from_json(const json& j, std::optional<double> p_override = std::nullopt);
/// `p_override`, when given, replaces whatever exponent the file carries.
std::vector<Vector> tuple_from_json(const json& j, std::optional<double> p_override = std::nullopt);

}  // namespace ndual::json_io
