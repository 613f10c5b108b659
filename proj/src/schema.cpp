#include "qgkm/schema.hpp"

#include <fstream>
#include <sstream>

#include "qgkm/errors.hpp"

namespace qgkm {

namespace {

const char* type_name(const Json& v) {
  switch (v.type()) {
    case Json::value_t::object: return "object";
    case Json::value_t::array: return "array";
    case Json::value_t::string: return "string";
    case Json::value_t::boolean: return "boolean";
    case Json::value_t::number_integer:
    case Json::value_t::number_unsigned: return "integer";
    case Json::value_t::number_float: return "number";
    case Json::value_t::null: return "null";
    default: return "unknown";
  }
}

bool has_type(const Json& v, const std::string& want) {
  if (want == "number") return v.is_number();
  if (want == "integer") return v.is_number_integer() || v.is_number_unsigned();
  return want == type_name(v);
}

void walk(const Json& schema, const Json& doc, const std::string& path,
          std::vector<std::string>& out) {
  if (!schema.is_object()) {
    out.push_back(path + ": schema node is not an object");
    return;
  }
  for (const auto& [key, value] : schema.items()) {
    if (key == "$schema" || key == "title" || key == "description") continue;
    if (key == "type") {
      if (!value.is_string() || !has_type(doc, value.get<std::string>()))
        out.push_back(path + ": expected " +
                      (value.is_string() ? value.get<std::string>() : std::string("?")) + ", got " +
                      type_name(doc));
    } else if (key == "enum") {
      bool hit = false;
      for (const Json& option : value) hit = hit || doc == option;
      if (!hit) out.push_back(path + ": value is not one of the allowed alternatives");
    } else if (key == "required") {
      if (doc.is_object())
        for (const Json& name : value)
          if (!doc.contains(name.get<std::string>()))
            out.push_back(path + ": missing required key '" + name.get<std::string>() + "'");
    } else if (key == "properties") {
      if (doc.is_object())
        for (const auto& [prop, sub] : value.items())
          if (doc.contains(prop)) walk(sub, doc.at(prop), path + "." + prop, out);
    } else if (key == "items") {
      if (doc.is_array())
        for (std::size_t k = 0; k < doc.size(); ++k)
          walk(value, doc[k], path + "[" + std::to_string(k) + "]", out);
    } else if (key == "minItems") {
      if (doc.is_array() && doc.size() < value.get<std::size_t>())
        out.push_back(path + ": fewer than " + std::to_string(value.get<std::size_t>()) +
                      " elements");
    } else {
      out.push_back(path + ": unsupported schema keyword '" + key + "'");
    }
  }
}

}  // namespace

std::vector<std::string> schema_violations(const Json& schema, const Json& doc) {
  std::vector<std::string> out;
  walk(schema, doc, "$", out);
  return out;
}

void require_valid(const Json& schema, const Json& doc, const std::string& label) {
  const std::vector<std::string> bad = schema_violations(schema, doc);
  if (bad.empty()) return;
  std::ostringstream msg;
  msg << label << " does not match its schema";
  for (const std::string& b : bad) msg << "; " << b;
  throw ParseError(msg.str());
}

std::string schema_dir() {
#ifdef QGKM_SCHEMA_DIR
  return QGKM_SCHEMA_DIR;
#else
  return "schemas";
#endif
}

Json load_schema(const std::string& name) {
  const std::string path = schema_dir() + "/" + name + ".schema.json";
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open schema file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("schema file " + path + " is not valid JSON: " + e.what());
  }
  return doc;
}

}  // namespace qgkm
