#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rftkit/format_verifier.hpp"
#include "rftkit/math_expr.hpp"

namespace rftkit {

enum class AnswerSource { BoxedInAnswerTag, BoxedAnywhere, None };

std::string_view to_string(AnswerSource source) noexcept;

struct ExtractedAnswer {
  std::string raw;  // verbatim content between the braces of \boxed{...}
  AnswerSource source = AnswerSource::None;
};

/// Last brace-balanced `\boxed{...}`. When the text has exactly one
/// `<answer>` pair and it contains a boxed answer, that one wins.
ExtractedAnswer extract_boxed(std::string_view text);

/// Parses a LaTeX / plain-math answer. Total: anything outside the supported
/// subset becomes OpaqueText holding the normalized string.
MathExpr parse_math(std::string_view raw);

/// Whitespace, `$`, `\left`/`\right`, spacing macros and trailing punctuation
/// removed, `\text{..}`-style wrappers unwrapped, lowercased.
std::string normalize_answer_string(std::string_view raw);

enum class EquivalenceMethod {
  ExactRational,
  NumericFallback,
  SetElementwise,
  ChoiceMatch,
  StringNormalized,
  Unparseable,
};

std::string_view to_string(EquivalenceMethod method) noexcept;

struct EquivalenceVerdict {
  bool equivalent = false;
  EquivalenceMethod method = EquivalenceMethod::Unparseable;
};

inline constexpr double kNumericRelativeTolerance = 1e-9;

/// Decides mathematical equivalence of two answer strings.
///
/// Both sides are parsed and normalized. Exact rationals compare exactly and
/// are never overridden by numeric comparison; a side with irrational residue
/// (pi, e, an inexact root or power) is compared at 64 digits with relative
/// tolerance 1e-9. Tuples compare in order, sets as multisets of equivalent
/// elements, choice letters case-insensitively. If either side is opaque the
/// normalized raw strings decide (StringNormalized when both are opaque,
/// Unparseable when only one is).
EquivalenceVerdict check_equivalence(std::string_view candidate, std::string_view ground_truth);

/// 0.5 (standard) or 1.0 (no-prior-prompt) when the boxed answer is
/// equivalent to `ground_truth`; 0.0 otherwise or when nothing is boxed.
double accuracy_reward(std::string_view response, std::string_view ground_truth, RewardMode mode);

/// Whether the response's boxed answer matches; the shared notion of
/// "correct" used by scoring and evaluation.
bool answer_is_correct(std::string_view response, std::string_view ground_truth);

}  // namespace rftkit
