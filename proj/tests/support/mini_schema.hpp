#pragma once

// Just enough JSON Schema to check service responses against
// schema/reward_service.schema.json from C++: type, const, enum, required,
// properties, additionalProperties:false, items, min/maxItems, pattern and
// local $ref. Anything else in the schema is ignored. The python test runs
// the full validator.

#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include <json.hpp>

namespace rftkit::testing {

class MiniSchema {
 public:
  explicit MiniSchema(nlohmann::json root) : root_(std::move(root)) {}

  static MiniSchema load() {
    std::ifstream in(std::string(RFTKIT_SCHEMA_DIR) + "/reward_service.schema.json");
    return MiniSchema(nlohmann::json::parse(in));
  }

  const nlohmann::json& root() const { return root_; }

  // Empty result means valid.
  std::vector<std::string> validate(const nlohmann::json& doc, const std::string& def) const {
    std::vector<std::string> errs;
    check(doc, root_.at("$defs").at(def), "", errs);
    return errs;
  }

 private:
  const nlohmann::json& resolve(const nlohmann::json& s) const {
    if (!s.contains("$ref")) return s;
    const std::string ref = s["$ref"];
    return root_.at("$defs").at(ref.substr(ref.rfind('/') + 1));
  }

  static bool type_ok(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "null") return v.is_null();
    return false;
  }

  static bool json_eq(const nlohmann::json& a, const nlohmann::json& b) {
    if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
    return a == b;
  }

  void check(const nlohmann::json& v, const nlohmann::json& raw, const std::string& at,
             std::vector<std::string>& errs) const {
    const auto& s = resolve(raw);
    if (s.contains("type") && !type_ok(v, s["type"])) {
      errs.push_back(at + ": wrong type");
      return;
    }
    if (s.contains("const") && !json_eq(v, s["const"])) errs.push_back(at + ": const mismatch");
    if (s.contains("enum")) {
      bool hit = false;
      for (const auto& e : s["enum"]) hit = hit || json_eq(v, e);
      if (!hit) errs.push_back(at + ": not in enum");
    }
    if (s.contains("pattern") && v.is_string() &&
        !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>()))) {
      errs.push_back(at + ": pattern");
    }
    if (v.is_object()) {
      if (s.contains("required")) {
        for (const auto& k : s["required"]) {
          if (!v.contains(k.get<std::string>())) errs.push_back(at + ": missing " + k.get<std::string>());
        }
      }
      const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
      for (const auto& [k, child] : v.items()) {
        if (s.contains("properties") && s["properties"].contains(k)) {
          check(child, s["properties"][k], at + "/" + k, errs);
        } else if (closed) {
          errs.push_back(at + ": unexpected " + k);
        }
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errs.push_back(at + ": too few");
      if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) errs.push_back(at + ": too many");
      if (s.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) check(v[i], s["items"], at + "/" + std::to_string(i), errs);
      }
    }
  }

  nlohmann::json root_;
};

}  // namespace rftkit::testing
