#include "rftkit/wire.hpp"

#include <json.hpp>

#include "rftkit/error.hpp"

namespace rftkit {

namespace {

using nlohmann::json;

std::optional<std::size_t> as_line(std::size_t line_no) {
  if (line_no == 0) return std::nullopt;
  return line_no;
}

json parse_object(std::string_view line, std::size_t line_no) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what(), as_line(line_no));
  }
  if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "expected a JSON object", as_line(line_no));
  return doc;
}

double number_field(const json& doc, const char* key, std::size_t line_no) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_number()) {
    throw Error(ErrorCode::SchemaViolation, std::string("field '") + key + "' must be a number", as_line(line_no));
  }
  return it->get<double>();
}

}  // namespace

std::string to_json(const RewardScore& score) {
  return json{{"accuracy", score.accuracy}, {"format", score.format}, {"total", score.total}}.dump();
}

std::string to_json(const FormatVerdict& verdict) {
  json violations = json::array();
  for (auto v : verdict.violations) violations.push_back(std::string(to_string(v)));
  return json{{"passed", verdict.passed}, {"violations", violations}}.dump();
}

std::string to_json(const EquivalenceVerdict& verdict) {
  return json{{"equivalent", verdict.equivalent}, {"method", std::string(to_string(verdict.method))}}.dump();
}

std::string to_json(const ClassificationResult& result) {
  json j{{"response_id", result.response_id}, {"behavior", std::string(to_string(result.behavior))}};
  j["value"] = result.value ? json(*result.value) : json(nullptr);
  j["classifier_raw"] = result.classifier_raw;
  return j.dump();
}

std::string to_json(const BehaviorReport& report) {
  json behaviors = json::object();
  for (const auto& b : all_behaviors()) {
    behaviors[std::string(to_string(b))] = {
        {"kind", is_cognitive(b) ? "cognitive" : "elicited"},
        {"total", report.total(b)},
        {"ratio", report.ratio_value(b)},
        {"ratio_4dp", format_fixed(report.ratio(b), 4)},
    };
  }
  return json{{"n_responses", report.n_responses},
              {"n_results", report.n_results},
              {"n_parse_failures", report.n_parse_failures},
              {"parse_failure_rate", report.parse_failure_rate()},
              {"behaviors", behaviors}}
      .dump();
}

std::string to_json(const EvalResult& result) {
  json j{{"benchmark", result.benchmark},
         {"n_items", result.n_items},
         {"n_correct", result.n_correct},
         {"accuracy_pct", format_fixed(result.accuracy_exact(), 2)},
         {"length_method", result.length_method}};
  j["approach"] = result.approach ? json(std::string(to_string(*result.approach))) : json(nullptr);
  j["avg_response_length"] = result.avg_response_length ? json(*result.avg_response_length) : json(nullptr);
  j["seed"] = result.seed ? json(*result.seed) : json(nullptr);
  return j.dump();
}

std::string to_json(const GroupRewardStats& stats) {
  return json{{"group_id", stats.group_id},
              {"rewards", stats.rewards},
              {"mean", stats.mean},
              {"std", stats.std},
              {"advantages", stats.advantages}}
      .dump();
}

RewardScore reward_score_from_json(std::string_view line, std::size_t line_no) {
  const json doc = parse_object(line, line_no);
  RewardScore s;
  s.accuracy = number_field(doc, "accuracy", line_no);
  s.format = number_field(doc, "format", line_no);
  s.total = number_field(doc, "total", line_no);
  return s;
}

ClassificationResult classification_from_json(std::string_view line, std::size_t line_no) {
  const json doc = parse_object(line, line_no);
  ClassificationResult r;
  auto id = doc.find("response_id");
  if (id == doc.end() || !id->is_number_unsigned()) {
    throw Error(ErrorCode::SchemaViolation, "field 'response_id' must be a non-negative integer", as_line(line_no));
  }
  r.response_id = id->get<std::size_t>();
  auto behavior = doc.find("behavior");
  std::optional<Behavior> parsed;
  if (behavior != doc.end() && behavior->is_string()) parsed = parse_behavior(behavior->get<std::string>());
  if (!parsed) throw Error(ErrorCode::SchemaViolation, "field 'behavior' is not a known behavior", as_line(line_no));
  r.behavior = *parsed;
  auto value = doc.find("value");
  if (value == doc.end()) {
    throw Error(ErrorCode::SchemaViolation, "missing field 'value'", as_line(line_no));
  }
  if (value->is_number_unsigned()) {
    r.value = value->get<std::uint64_t>();
  } else if (!value->is_null()) {
    throw Error(ErrorCode::SchemaViolation, "field 'value' must be a non-negative integer or null", as_line(line_no));
  }
  if (auto raw = doc.find("classifier_raw"); raw != doc.end() && raw->is_string()) r.classifier_raw = raw->get<std::string>();
  return r;
}

}  // namespace rftkit
