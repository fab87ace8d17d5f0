#pragma once

// Interpreter for the JSON Schema keywords used by report.schema.json:
// type, const, enum, required, properties, items, minItems, maxItems,
// minimum, minLength, allOf, if/then.

#include <fstream>
#include <optional>
#include <string>

#include "json.hpp"

namespace schema {

using nlohmann::json;

inline bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

/// First violation found, as "path: problem".
inline std::optional<std::string> check(const json& v, const json& s, const std::string& path = "$") {
  auto bad = [&](const std::string& why) { return std::optional<std::string>(path + ": " + why); };
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
    } else {
      ok = has_type(v, s["type"].get<std::string>());
    }
    if (!ok) return bad("expected type " + s["type"].dump() + ", found " + v.dump());
  }
  if (s.contains("const") && v != s["const"]) return bad("expected " + s["const"].dump());
  if (s.contains("enum")) {
    bool ok = false;
    for (auto& e : s["enum"]) ok = ok || e == v;
    if (!ok) return bad(v.dump() + " not in " + s["enum"].dump());
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
    return bad("below minimum");
  if (s.contains("minLength") && v.is_string() && v.get<std::string>().size() < s["minLength"].get<size_t>())
    return bad("string too short");
  if (v.is_object()) {
    if (s.contains("required"))
      for (auto& k : s["required"])
        if (!v.contains(k.get<std::string>())) return bad("missing key " + k.get<std::string>());
    if (s.contains("properties"))
      for (auto& [k, sub] : s["properties"].items())
        if (v.contains(k))
          if (auto e = check(v[k], sub, path + "." + k)) return e;
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<size_t>()) return bad("too few items");
    if (s.contains("maxItems") && v.size() > s["maxItems"].get<size_t>()) return bad("too many items");
    if (s.contains("items"))
      for (size_t i = 0; i < v.size(); ++i)
        if (auto e = check(v[i], s["items"], path + "[" + std::to_string(i) + "]")) return e;
  }
  if (s.contains("allOf"))
    for (auto& sub : s["allOf"])
      if (auto e = check(v, sub, path)) return e;
  if (s.contains("if") && !check(v, s["if"], path) && s.contains("then"))
    if (auto e = check(v, s["then"], path)) return e;
  return std::nullopt;
}

inline json load(const std::string& file) {
  std::ifstream in(file);
  return json::parse(in);
}

}  // namespace schema
