#include "rftkit/behavior_lab.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <utility>

#include "rftkit/error.hpp"

namespace rftkit {

namespace {

struct BehaviorText {
  std::string_view name;
  std::string_view title;
  std::string_view description;
};

BehaviorText describe(CognitiveBehavior b) {
  switch (b) {
    case CognitiveBehavior::Verification:
      return {"verification", "verification",
              "Verification is any place where the model explicitly checks or validates an "
              "intermediate result, for example by substituting a value back, recomputing a step, "
              "or writing \"let me check\" and then checking. Each separate check counts once."};
    case CognitiveBehavior::Backtracking:
      return {"backtracking", "backtracking",
              "Backtracking is any place where the model realizes a line of attack is wrong or not "
              "working and explicitly abandons it or revises it to try a different approach. Each "
              "abandoned or revised approach counts once."};
    case CognitiveBehavior::SubgoalSetting:
      return {"subgoal_setting", "subgoal setting",
              "Subgoal setting is any place where the model breaks the problem into smaller, "
              "intermediate goals, for example \"first I need to find x, then I can compute y\". Each "
              "stated intermediate goal counts once."};
    case CognitiveBehavior::BackwardChaining:
      return {"backward_chaining", "backward chaining",
              "Backward chaining is any place where the model reasons from the desired result back "
              "toward the given facts, for example \"to get the area we need the radius, and to get "
              "the radius we need...\". Each backward chain counts once."};
  }
  return {};
}

BehaviorText describe(ElicitedBehavior b) {
  switch (b) {
    case ElicitedBehavior::Reasoning:
      return {"reasoning", "step-by-step reasoning",
              "The behavior is present when the response works through the problem with explicit "
              "step-by-step logical reasoning before giving its answer."};
    case ElicitedBehavior::Planning:
      return {"planning", "explicit planning",
              "The behavior is present when the response first lays out a plan, such as a list of "
              "steps it intends to follow, before carrying the plan out."};
    case ElicitedBehavior::CodeBasedReasoning:
      return {"code_based_reasoning", "code-based reasoning",
              "The behavior is present when the response writes program code, or reasons in terms of "
              "code it would run, as part of solving the problem."};
    case ElicitedBehavior::KnowledgeRecall:
      return {"knowledge_recall", "knowledge recall",
              "The behavior is present when the response recalls relevant definitions, theorems, "
              "formulas, or facts before applying them to the problem."};
    case ElicitedBehavior::NullExampleUtilization:
      return {"null_example_utilization", "example generation",
              "The behavior is present when the response generates or refers to illustrative "
              "examples related to the question and uses them in its solution."};
  }
  return {};
}

BehaviorText describe(const Behavior& b) {
  return std::visit([](auto v) { return describe(v); }, b);
}

std::size_t slot(const Behavior& b) {
  return std::visit([](auto v) { return static_cast<std::size_t>(v); }, b);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips markdown emphasis/backticks a model may wrap around the verdict.
std::string_view strip_decoration(std::string_view s) {
  auto decor = [](char c) { return c == '*' || c == '`' || c == '_' || c == '"' || c == '\''; };
  while (!s.empty() && decor(s.front())) s.remove_prefix(1);
  while (!s.empty() && (decor(s.back()) || s.back() == '.')) s.remove_suffix(1);
  return trim(s);
}

// Last occurrence of `marker` that starts a word, or npos.
std::size_t marker_pos(std::string_view l, std::string_view marker) {
  auto pos = l.rfind(marker);
  while (pos != std::string_view::npos) {
    if (pos == 0 || !std::isalnum(static_cast<unsigned char>(l[pos - 1]))) return pos;
    pos = l.rfind(marker, pos - 1);
  }
  return pos;
}

std::optional<std::uint64_t> parse_line(const Behavior& behavior, std::string_view line) {
  const std::string l = lower(strip_decoration(trim(line)));
  const std::string_view marker = is_cognitive(behavior) ? "count:" : "present:";
  const auto pos = marker_pos(l, marker);
  if (pos == std::string_view::npos) return std::nullopt;
  std::string_view rest = strip_decoration(std::string_view(l).substr(pos + marker.size()));
  if (is_cognitive(behavior)) {
    if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return std::nullopt;
    }
    if (rest.size() > 9) return std::nullopt;
    return std::strtoull(std::string(rest).c_str(), nullptr, 10);
  }
  if (rest == "yes") return 1;
  if (rest == "no") return 0;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Behavior behavior) noexcept { return describe(behavior).name; }

std::vector<Behavior> all_behaviors() {
  std::vector<Behavior> out;
  for (auto b : kCognitiveBehaviors) out.emplace_back(b);
  for (auto b : kElicitedBehaviors) out.emplace_back(b);
  return out;
}

std::optional<Behavior> parse_behavior(std::string_view name) noexcept {
  for (const auto& b : all_behaviors()) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

std::optional<ElicitedBehavior> elicited_behavior_for(PpeApproach approach) noexcept {
  switch (approach) {
    case PpeApproach::Think: return ElicitedBehavior::Reasoning;
    case PpeApproach::Plan: return ElicitedBehavior::Planning;
    case PpeApproach::Code: return ElicitedBehavior::CodeBasedReasoning;
    case PpeApproach::Knowledge: return ElicitedBehavior::KnowledgeRecall;
    case PpeApproach::Examples: return ElicitedBehavior::NullExampleUtilization;
    case PpeApproach::NoPriorPrompt: return std::nullopt;
  }
  return std::nullopt;
}

std::string build_classifier_prompt(const Behavior& behavior, std::string_view response) {
  if (response.empty()) throw Error(ErrorCode::EmptyResponse, "cannot classify an empty response");
  const BehaviorText text = describe(behavior);
  std::string prompt;
  prompt.reserve(response.size() + 1024);
  prompt += "You are analyzing a language model's response to a problem for ";
  prompt += text.title;
  prompt += ".\n\n";
  prompt += text.description;
  prompt += "\n\nThe response to analyze is between the markers below.\n\n";
  prompt += "=== RESPONSE START ===\n";
  prompt += response;
  prompt += "\n=== RESPONSE END ===\n\n";
  if (is_cognitive(behavior)) {
    prompt += "Briefly quote each instance you find, then count them. If there are none, the count is 0.\n";
    prompt += "Your final line must be exactly of the form:\nCOUNT: <n>\n";
    prompt += "where <n> is a non-negative integer.";
  } else {
    prompt += "Decide whether the behavior is present in the response. Give a short justification.\n";
    prompt += "Your final line must be exactly one of:\nPRESENT: yes\nPRESENT: no";
  }
  return prompt;
}

std::optional<std::uint64_t> parse_classifier_reply(const Behavior& behavior, std::string_view reply) {
  std::vector<std::string_view> lines;
  for (std::size_t from = 0; from <= reply.size();) {
    const auto nl = reply.find('\n', from);
    const auto to = nl == std::string_view::npos ? reply.size() : nl;
    lines.push_back(reply.substr(from, to - from));
    from = to + 1;
  }
  const std::string_view marker = is_cognitive(behavior) ? "count:" : "present:";
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    if (marker_pos(lower(*it), marker) != std::string_view::npos) return parse_line(behavior, *it);
  }
  return std::nullopt;
}

std::uint64_t BehaviorReport::total(const Behavior& behavior) const noexcept {
  return is_cognitive(behavior) ? cognitive_totals[slot(behavior)] : elicited_totals[slot(behavior)];
}

BigRational BehaviorReport::ratio(const Behavior& behavior) const {
  if (n_responses == 0) return BigRational(0);
  return BigRational(BigInt(total(behavior)), BigInt(n_responses));
}

double BehaviorReport::ratio_value(const Behavior& behavior) const { return to_double(ratio(behavior)); }

double BehaviorReport::parse_failure_rate() const noexcept {
  return n_results == 0 ? 0.0 : static_cast<double>(n_parse_failures) / static_cast<double>(n_results);
}

BehaviorReport aggregate(std::span<const ClassificationResult> results, std::size_t n_responses) {
  if (n_responses == 0) throw Error(ErrorCode::InvalidArgument, "n_responses must be positive");
  BehaviorReport report;
  report.n_responses = n_responses;
  report.n_results = results.size();
  std::set<std::pair<std::size_t, std::string_view>> seen;
  for (const auto& r : results) {
    if (r.response_id >= n_responses) {
      throw Error(ErrorCode::InvalidArgument, "response_id " + std::to_string(r.response_id) +
                                                  " is out of range for " + std::to_string(n_responses) +
                                                  " responses");
    }
    if (!seen.emplace(r.response_id, to_string(r.behavior)).second) {
      throw Error(ErrorCode::DuplicateResult, "duplicate result for response " + std::to_string(r.response_id) +
                                                  " and behavior " + std::string(to_string(r.behavior)));
    }
    if (r.parse_failed()) {
      ++report.n_parse_failures;
      continue;
    }
    if (is_cognitive(r.behavior)) {
      report.cognitive_totals[slot(r.behavior)] += *r.value;
    } else {
      if (*r.value > 1) {
        throw Error(ErrorCode::InvalidArgument, "elicited behavior values must be 0 or 1");
      }
      report.elicited_totals[slot(r.behavior)] += *r.value;
    }
  }
  return report;
}

}  // namespace rftkit
