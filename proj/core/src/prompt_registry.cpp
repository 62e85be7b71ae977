#include "rftkit/prompt_registry.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rftkit/error.hpp"

namespace rftkit {

namespace {

using nlohmann::json;

constexpr std::string_view kWrapper = "User: {question} Assistant: ";

constexpr std::string_view kConversationOpening =
    "A conversation between User and Assistant. The user asks a question, and the Assistant solves it. ";

constexpr std::string_view kBoxedReminder =
    " The final answer inside <answer> </answer> is written as \\boxed{final answer}.";

std::string make_instruction(std::string_view behavior, std::string_view tag,
                             std::string_view content_name) {
  std::string text(kConversationOpening);
  text += behavior;
  text += " The ";
  text += content_name;
  text += " and answer are enclosed within <";
  text += tag;
  text += "> </";
  text += tag;
  text += "> and <answer> </answer> tags, respectively, i.e., <";
  text += tag;
  text += "> ";
  text += content_name;
  text += " here </";
  text += tag;
  text += "><answer> answer here </answer>.";
  text += kBoxedReminder;
  return text;
}

PriorPromptTemplate builtin_template(PpeApproach approach) {
  PriorPromptTemplate t;
  t.approach = approach;
  t.wrapper = std::string(kWrapper);
  switch (approach) {
    case PpeApproach::Think:
      t.tag = "think";
      t.instruction = make_instruction(
          "The assistant first thinks about the reasoning process step by step in the mind and then "
          "provides the user with the answer.",
          "think", "reasoning process");
      break;
    case PpeApproach::Plan:
      t.tag = "plan";
      t.instruction = make_instruction(
          "The assistant first lays out an explicit plan as a list of numbered steps for solving the "
          "problem, then carries out the plan and provides the user with the answer.",
          "plan", "plan");
      break;
    case PpeApproach::Code:
      t.tag = "code";
      t.instruction = make_instruction(
          "The assistant first writes the code required to solve the problem, with comments "
          "explaining each step, and then uses it to provide the user with the answer.",
          "code", "code");
      break;
    case PpeApproach::Knowledge:
      t.tag = "knowledge";
      t.instruction = make_instruction(
          "The assistant first recalls relevant knowledge, such as definitions, theorems, or "
          "formulas, and then uses it to provide the user with the answer.",
          "knowledge", "knowledge");
      break;
    case PpeApproach::Examples:
      t.tag = "examples";
      t.instruction = make_instruction(
          "The assistant first provides illustrative examples relevant to the question and then "
          "uses them to provide the user with the answer.",
          "examples", "examples");
      break;
    case PpeApproach::NoPriorPrompt:
      break;
  }
  return t;
}

std::size_t index_of(PpeApproach approach) { return static_cast<std::size_t>(approach); }

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidTemplate, message);
}

std::string string_field(const json& obj, const char* key, std::size_t index) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    invalid("template entry " + std::to_string(index) + ": field '" + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(PpeApproach approach) noexcept {
  switch (approach) {
    case PpeApproach::Think: return "think";
    case PpeApproach::Plan: return "plan";
    case PpeApproach::Code: return "code";
    case PpeApproach::Knowledge: return "knowledge";
    case PpeApproach::Examples: return "examples";
    case PpeApproach::NoPriorPrompt: return "none";
  }
  return "none";
}

std::optional<PpeApproach> parse_approach(std::string_view name) noexcept {
  for (auto a : kAllApproaches) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::optional<std::string> expected_tag(PpeApproach approach) {
  if (approach == PpeApproach::NoPriorPrompt) return std::nullopt;
  return std::string(to_string(approach));
}

bool is_valid_tag_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

void validate_template(const PriorPromptTemplate& t) {
  if (count_occurrences(t.wrapper, kQuestionPlaceholder) != 1) {
    invalid("wrapper must contain {question} exactly once");
  }
  if (!ends_with(t.wrapper, kAssistantCue)) {
    invalid("wrapper must end with the assistant cue \"Assistant: \"");
  }
  if (t.approach == PpeApproach::NoPriorPrompt) {
    if (t.tag) invalid("the none approach carries no tag");
    if (!t.instruction.empty()) invalid("the none approach carries no instruction");
    return;
  }
  const std::string want = *expected_tag(t.approach);
  if (!t.tag || *t.tag != want) invalid("approach " + want + " must use tag '" + want + "'");
  for (const std::string& needle :
       {"<" + want + ">", "</" + want + ">", std::string("<answer>"), std::string("</answer>")}) {
    if (t.instruction.find(needle) == std::string::npos) {
      invalid("instruction for " + want + " must mention " + needle);
    }
  }
}

std::string render_prompt(const PriorPromptTemplate& t, std::string_view question) {
  if (question.empty()) throw Error(ErrorCode::EmptyQuestion, "question must be nonempty");
  const auto at = t.wrapper.find(kQuestionPlaceholder);
  if (at == std::string::npos) invalid("wrapper has no {question} placeholder");

  std::string out;
  out.reserve(t.instruction.size() + t.wrapper.size() + question.size() + 1);
  if (!t.instruction.empty()) {
    out += t.instruction;
    out += ' ';
  }
  out.append(t.wrapper, 0, at);
  out += question;
  out.append(t.wrapper, at + kQuestionPlaceholder.size());
  return out;
}

PromptRegistry::PromptRegistry() {
  for (auto a : kAllApproaches) templates_[index_of(a)] = builtin_template(a);
}

const PromptRegistry& PromptRegistry::builtin() {
  static const PromptRegistry registry;
  return registry;
}

PromptRegistry PromptRegistry::from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    invalid(std::string("template file is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) invalid("template file must be a JSON array of template objects");

  PromptRegistry registry;
  std::array<bool, kAllApproaches.size()> seen{};
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& entry = doc[i];
    if (!entry.is_object()) invalid("template entry " + std::to_string(i) + " is not an object");
    for (const auto& [key, _] : entry.items()) {
      if (key != "approach" && key != "tag" && key != "instruction" && key != "wrapper") {
        invalid("template entry " + std::to_string(i) + ": unknown field '" + key + "'");
      }
    }
    const std::string name = string_field(entry, "approach", i);
    const auto approach = parse_approach(name);
    if (!approach) invalid("template entry " + std::to_string(i) + ": unknown approach '" + name + "'");
    if (seen[index_of(*approach)]) invalid("approach '" + name + "' listed twice");
    seen[index_of(*approach)] = true;

    PriorPromptTemplate t;
    t.approach = *approach;
    auto tag = entry.find("tag");
    if (tag != entry.end() && !tag->is_null()) {
      if (!tag->is_string()) invalid("template entry " + std::to_string(i) + ": tag must be a string or null");
      if (!tag->get<std::string>().empty()) t.tag = tag->get<std::string>();
    }
    if (t.tag && !is_valid_tag_name(*t.tag)) invalid("invalid tag name '" + *t.tag + "'");
    t.instruction = string_field(entry, "instruction", i);
    t.wrapper = string_field(entry, "wrapper", i);
    validate_template(t);
    registry.templates_[index_of(*approach)] = std::move(t);
  }
  return registry;
}

PromptRegistry PromptRegistry::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open template file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

const PriorPromptTemplate& PromptRegistry::get(PpeApproach approach) const {
  return templates_[index_of(approach)];
}

std::string PromptRegistry::to_json() const {
  json doc = json::array();
  for (const auto& t : templates_) {
    doc.push_back({{"approach", to_string(t.approach)},
                   {"tag", t.tag ? json(*t.tag) : json(nullptr)},
                   {"instruction", t.instruction},
                   {"wrapper", t.wrapper}});
  }
  return doc.dump(2) + "\n";
}

std::string PromptRegistry::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const PriorPromptTemplate& get_template(PpeApproach approach) {
  return PromptRegistry::builtin().get(approach);
}

}  // namespace rftkit
