#pragma once

// File formats: point-set JSON, distance-matrix CSV, and a JSON writer that
// prints every double with 17 significant digits.

#include "crosp/discrepancy.hpp"
#include "crosp/spaces.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace crosp {

using Json = nlohmann::ordered_json;

/// {"space": {"family": "cp", "n": 2}, "points": [[...], ...], "label": "..."}
Json point_set_to_json(const PointSet& set);
PointSet point_set_from_json(const Json& doc);

/// Comma-separated N×N matrix of geodesic distances; blank lines and lines
/// starting with '#' are ignored.
DistanceMatrix parse_distance_csv(std::string_view text);
std::string distance_csv(const DistanceMatrix& dist);

std::string format_double(double x);
/// Deterministic serialization; non-finite doubles become null.
std::string dump_json(const Json& value, int indent = 2);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace crosp
