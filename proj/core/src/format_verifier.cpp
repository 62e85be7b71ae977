#include "rftkit/format_verifier.hpp"

#include <algorithm>

#include "rftkit/error.hpp"
#include "rftkit/prompt_registry.hpp"

namespace rftkit {

namespace {

struct Literals {
  std::string open;
  std::string close;
};

Literals literals_for(std::string_view name) {
  return {"<" + std::string(name) + ">", "</" + std::string(name) + ">"};
}

// Positions of every `needle` in `text`.
std::vector<std::size_t> find_all(std::string_view text, std::string_view needle) {
  std::vector<std::size_t> out;
  for (auto pos = text.find(needle); pos != std::string_view::npos; pos = text.find(needle, pos + 1)) {
    out.push_back(pos);
  }
  return out;
}

bool covered(std::size_t pos, const std::vector<TagPair>& pairs) {
  return std::any_of(pairs.begin(), pairs.end(), [pos](const TagPair& p) {
    return pos >= p.open_start && pos < p.close_end;
  });
}

bool has_stray(std::string_view text, const Literals& lit, const std::vector<TagPair>& pairs) {
  for (auto pos : find_all(text, lit.open)) {
    if (!covered(pos, pairs)) return true;
  }
  for (auto pos : find_all(text, lit.close)) {
    if (!covered(pos, pairs)) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(FormatViolation v) noexcept {
  switch (v) {
    case FormatViolation::MissingBehaviorTag: return "MissingBehaviorTag";
    case FormatViolation::MissingAnswerTag: return "MissingAnswerTag";
    case FormatViolation::DuplicateBehaviorPair: return "DuplicateBehaviorPair";
    case FormatViolation::DuplicateAnswerPair: return "DuplicateAnswerPair";
    case FormatViolation::UnclosedTag: return "UnclosedTag";
    case FormatViolation::OrderViolation: return "OrderViolation";
    case FormatViolation::OverlappingPairs: return "OverlappingPairs";
  }
  return "Unknown";
}

bool FormatVerdict::has(FormatViolation v) const noexcept {
  return std::find(violations.begin(), violations.end(), v) != violations.end();
}

std::vector<TagPair> scan_tags(std::string_view text, std::string_view name) {
  const Literals lit = literals_for(name);
  std::vector<TagPair> pairs;
  std::size_t cursor = 0;
  while (true) {
    const auto open = text.find(lit.open, cursor);
    if (open == std::string_view::npos) break;
    const auto open_end = open + lit.open.size();
    const auto close = text.find(lit.close, open_end);
    if (close == std::string_view::npos) break;
    const auto close_end = close + lit.close.size();
    pairs.push_back(TagPair{std::string(name), open, open_end, close, close_end,
                            text.substr(open_end, close - open_end)});
    cursor = close_end;
  }
  return pairs;
}

FormatVerdict verify_format(std::string_view text, std::string_view behavior_tag) {
  if (behavior_tag == kAnswerTag || !is_valid_tag_name(behavior_tag)) {
    throw Error(ErrorCode::InvalidTagName,
                "behavior tag must be a valid tag name other than 'answer': '" + std::string(behavior_tag) + "'");
  }
  FormatVerdict verdict;
  auto& v = verdict.violations;

  const auto behavior = scan_tags(text, behavior_tag);
  const auto answer = scan_tags(text, kAnswerTag);

  if (behavior.empty()) v.push_back(FormatViolation::MissingBehaviorTag);
  if (behavior.size() > 1) v.push_back(FormatViolation::DuplicateBehaviorPair);
  if (answer.empty()) v.push_back(FormatViolation::MissingAnswerTag);
  if (answer.size() > 1) v.push_back(FormatViolation::DuplicateAnswerPair);

  if (has_stray(text, literals_for(behavior_tag), behavior) ||
      has_stray(text, literals_for(kAnswerTag), answer)) {
    v.push_back(FormatViolation::UnclosedTag);
  }

  if (behavior.size() == 1 && answer.size() == 1) {
    const TagPair& b = behavior.front();
    const TagPair& a = answer.front();
    if (b.close_end > a.open_start) {
      const bool disjoint = a.close_end <= b.open_start;
      v.push_back(disjoint ? FormatViolation::OrderViolation : FormatViolation::OverlappingPairs);
    }
  }

  verdict.passed = v.empty();
  return verdict;
}

double format_reward(const FormatVerdict& verdict, RewardMode mode) noexcept {
  if (mode == RewardMode::NoPriorPrompt) return 0.0;
  return verdict.passed ? 0.5 : 0.0;
}

}  // namespace rftkit
