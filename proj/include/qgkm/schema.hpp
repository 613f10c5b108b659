#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qgkm {

using Json = nlohmann::json;

/// Violations of a document against a schema written in the small dialect the
/// shipped schema files use: `type` (single name), `required`, `properties`,
/// `items` (one schema for every element), `enum`, and `minItems`.
/// Annotation keys ($schema, title, description) are ignored; any other
/// keyword is itself reported as a violation, so a schema cannot silently
/// promise more than this checker enforces. An empty result means valid.
std::vector<std::string> schema_violations(const Json& schema, const Json& doc);

/// Throws ParseError naming `label` and the first violations when the
/// document does not validate.
void require_valid(const Json& schema, const Json& doc, const std::string& label);

/// Directory holding the shipped *.schema.json files (compiled in).
std::string schema_dir();

/// Loads `<schema_dir()>/<name>.schema.json`.
Json load_schema(const std::string& name);

}  // namespace qgkm
