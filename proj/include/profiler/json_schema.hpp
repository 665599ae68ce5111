#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace profiler {

/// Validates `doc` against a JSON Schema, supporting the keywords the shipped
/// schemas use: type, enum, const, required, properties, additionalProperties
/// (boolean), items, minItems, maxItems, minLength, pattern, minimum, maximum,
/// oneOf, anyOf, allOf and local "$ref": "#/$defs/...". Unknown keywords are ignored.
/// Returns one message per violation; empty means valid.
std::vector<std::string> validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema);

}  // namespace profiler
