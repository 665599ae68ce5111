#include "profiler/json_schema.hpp"

#include <regex>

namespace profiler {
namespace {

using json = nlohmann::json;

bool has_type(const json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  return false;
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void check(const json& v, const json& s, const std::string& path, std::vector<std::string>& errs) const {
    if (s.is_boolean()) {
      if (!s.get<bool>()) errs.push_back(path + ": not allowed");
      return;
    }
    if (s.contains("$ref")) {
      check(v, resolve(s["$ref"].get<std::string>()), path, errs);
    }
    if (s.contains("type")) {
      const auto& t = s["type"];
      bool ok = false;
      if (t.is_string()) {
        ok = has_type(v, t.get<std::string>());
      } else {
        for (const auto& alt : t) ok = ok || has_type(v, alt.get<std::string>());
      }
      if (!ok) {
        errs.push_back(path + ": expected type " + t.dump() + ", got " + v.type_name());
        return;
      }
    }
    if (s.contains("const") && v != s["const"]) {
      errs.push_back(path + ": expected " + s["const"].dump() + ", got " + v.dump());
    }
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found = found || v == e;
      if (!found) errs.push_back(path + ": " + v.dump() + " not in " + s["enum"].dump());
    }
    if (v.is_string()) {
      const auto& str = v.get_ref<const std::string&>();
      if (s.contains("minLength") && str.size() < s["minLength"].get<std::size_t>()) {
        errs.push_back(path + ": string shorter than " + s["minLength"].dump());
      }
      if (s.contains("pattern") && !std::regex_search(str, std::regex(s["pattern"].get<std::string>()))) {
        errs.push_back(path + ": '" + str + "' does not match " + s["pattern"].get<std::string>());
      }
    }
    if (v.is_number()) {
      if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>()) {
        errs.push_back(path + ": below minimum " + s["minimum"].dump());
      }
      if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>()) {
        errs.push_back(path + ": above maximum " + s["maximum"].dump());
      }
    }
    if (v.is_object()) {
      if (s.contains("required")) {
        for (const auto& key : s["required"]) {
          if (!v.contains(key.get<std::string>())) {
            errs.push_back(path + ": missing required field '" + key.get<std::string>() + "'");
          }
        }
      }
      const json* props = s.contains("properties") ? &s["properties"] : nullptr;
      for (const auto& [key, child] : v.items()) {
        if (props != nullptr && props->contains(key)) {
          check(child, (*props)[key], path + "/" + key, errs);
        } else if (s.contains("additionalProperties") && s["additionalProperties"].is_boolean() &&
                   !s["additionalProperties"].get<bool>()) {
          errs.push_back(path + ": unexpected field '" + key + "'");
        }
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) {
        errs.push_back(path + ": fewer than " + s["minItems"].dump() + " items");
      }
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) {
        errs.push_back(path + ": more than " + s["maxItems"].dump() + " items");
      }
      if (s.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          check(v[i], s["items"], path + "/" + std::to_string(i), errs);
        }
      }
    }
    if (s.contains("allOf")) {
      for (const auto& sub : s["allOf"]) check(v, sub, path, errs);
    }
    if (s.contains("anyOf")) {
      bool any = false;
      for (const auto& sub : s["anyOf"]) {
        std::vector<std::string> e;
        check(v, sub, path, e);
        any = any || e.empty();
      }
      if (!any) errs.push_back(path + ": matches none of anyOf");
    }
    if (s.contains("oneOf")) {
      int matches = 0;
      for (const auto& sub : s["oneOf"]) {
        std::vector<std::string> e;
        check(v, sub, path, e);
        matches += e.empty() ? 1 : 0;
      }
      if (matches != 1) {
        errs.push_back(path + ": matches " + std::to_string(matches) + " branches of oneOf, expected 1");
      }
    }
  }

 private:
  const json& resolve(const std::string& ref) const {
    if (ref.rfind("#/", 0) != 0) throw std::invalid_argument("only local $ref supported: " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  const json& root_;
};

}  // namespace

std::vector<std::string> validate_against_schema(const nlohmann::json& doc, const nlohmann::json& schema) {
  std::vector<std::string> errs;
  Validator(schema).check(doc, schema, "", errs);
  return errs;
}

}  // namespace profiler
