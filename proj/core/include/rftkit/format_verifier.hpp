#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rftkit {

/// One matched `<name>...</name>` pair. Offsets are byte offsets into the
/// scanned text; `inner` views that same text, so it must outlive the pair.
struct TagPair {
  std::string name;
  std::size_t open_start = 0;
  std::size_t open_end = 0;
  std::size_t close_start = 0;
  std::size_t close_end = 0;
  std::string_view inner;
};

enum class FormatViolation {
  MissingBehaviorTag,
  MissingAnswerTag,
  DuplicateBehaviorPair,
  DuplicateAnswerPair,
  UnclosedTag,
  OrderViolation,
  OverlappingPairs,
};

std::string_view to_string(FormatViolation v) noexcept;

struct FormatVerdict {
  bool passed = false;
  std::vector<FormatViolation> violations;

  bool has(FormatViolation v) const noexcept;
};

enum class RewardMode { Standard, NoPriorPrompt };

inline constexpr std::string_view kAnswerTag = "answer";

/// All `<name>` / `</name>` pairs, left to right: each open pairs with the
/// nearest following close and scanning resumes after that close. Opens with
/// no close are skipped here and reported by verify_format.
std::vector<TagPair> scan_tags(std::string_view text, std::string_view name);

/// Passes iff there is exactly one behavior pair and exactly one answer pair,
/// the behavior pair closes before the answer pair opens, and no unpaired
/// behavior/answer tag sits outside a pair of its own name. Other text,
/// including unrelated markup, is ignored. Total: never throws, except
/// Error(InvalidTagName) when `behavior_tag` is "answer" or malformed.
FormatVerdict verify_format(std::string_view text, std::string_view behavior_tag);

/// 0.5 when passed in standard mode, otherwise 0.0.
double format_reward(const FormatVerdict& verdict, RewardMode mode) noexcept;

}  // namespace rftkit
