#include "rftkit/answer_engine.hpp"

#include <functional>
#include <vector>

namespace rftkit {

namespace {

struct BoxedSpan {
  std::size_t start = 0;  // offset of the backslash
  std::string content;
};

// Every `\boxed{...}` whose braces balance; escaped braces do not count.
std::vector<BoxedSpan> find_boxed(std::string_view text) {
  constexpr std::string_view kMacro = "\\boxed";
  std::vector<BoxedSpan> found;
  for (auto pos = text.find(kMacro); pos != std::string_view::npos; pos = text.find(kMacro, pos + 1)) {
    std::size_t i = pos + kMacro.size();
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i >= text.size() || text[i] != '{') continue;
    const std::size_t open = i;
    int depth = 0;
    std::size_t close = std::string_view::npos;
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '\\' && i + 1 < text.size()) {
        ++i;
        continue;
      }
      if (c == '{') ++depth;
      if (c == '}' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close == std::string_view::npos) continue;
    found.push_back({pos, std::string(text.substr(open + 1, close - open - 1))});
  }
  return found;
}

bool compare(const MathExpr& a, const MathExpr& b);

// Perfect matching between two element lists under `compare`.
bool sets_match(const std::vector<MathExpr>& xs, const std::vector<MathExpr>& ys) {
  if (xs.size() != ys.size()) return false;
  const std::size_t n = xs.size();
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) edge[i][j] = compare(xs[i], ys[j]);
  }
  std::vector<int> owner(n, -1);
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t i, std::vector<bool>& seen) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!edge[i][j] || seen[j]) continue;
      seen[j] = true;
      if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), seen)) {
        owner[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> seen(n);
    if (!augment(i, seen)) return false;
  }
  return true;
}

bool is_collection(const MathExpr& e) { return e.kind == ExprKind::Tuple || e.kind == ExprKind::FiniteSet; }

EquivalenceVerdict compare_verdict(const MathExpr& a, const MathExpr& b) {
  if (a.kind == ExprKind::ChoiceLetter || b.kind == ExprKind::ChoiceLetter) {
    return {a.kind == b.kind && a.letter == b.letter, EquivalenceMethod::ChoiceMatch};
  }
  if (is_collection(a) || is_collection(b)) {
    if (a.kind != b.kind) return {false, EquivalenceMethod::SetElementwise};
    if (a.kind == ExprKind::Tuple) {
      bool eq = a.args.size() == b.args.size();
      for (std::size_t i = 0; eq && i < a.args.size(); ++i) eq = compare(a.args[i], b.args[i]);
      return {eq, EquivalenceMethod::SetElementwise};
    }
    return {sets_match(a.args, b.args), EquivalenceMethod::SetElementwise};
  }
  if (a.kind == ExprKind::OpaqueText || b.kind == ExprKind::OpaqueText) {
    return {a == b, EquivalenceMethod::StringNormalized};
  }
  if (a.is_number() && b.is_number()) return {a.value == b.value, EquivalenceMethod::ExactRational};
  if (a == b) return {true, EquivalenceMethod::ExactRational};
  if (auto eq = numerically_equal(a, b, kNumericRelativeTolerance)) {
    return {*eq, EquivalenceMethod::NumericFallback};
  }
  return {false, EquivalenceMethod::NumericFallback};
}

bool compare(const MathExpr& a, const MathExpr& b) { return compare_verdict(a, b).equivalent; }

}  // namespace

std::string_view to_string(AnswerSource source) noexcept {
  switch (source) {
    case AnswerSource::BoxedInAnswerTag: return "BoxedInAnswerTag";
    case AnswerSource::BoxedAnywhere: return "BoxedAnywhere";
    case AnswerSource::None: return "None";
  }
  return "None";
}

std::string_view to_string(EquivalenceMethod method) noexcept {
  switch (method) {
    case EquivalenceMethod::ExactRational: return "ExactRational";
    case EquivalenceMethod::NumericFallback: return "NumericFallback";
    case EquivalenceMethod::SetElementwise: return "SetElementwise";
    case EquivalenceMethod::ChoiceMatch: return "ChoiceMatch";
    case EquivalenceMethod::StringNormalized: return "StringNormalized";
    case EquivalenceMethod::Unparseable: return "Unparseable";
  }
  return "Unparseable";
}

ExtractedAnswer extract_boxed(std::string_view text) {
  const auto answers = scan_tags(text, kAnswerTag);
  if (answers.size() == 1) {
    const auto inside = find_boxed(answers.front().inner);
    if (!inside.empty()) return {inside.back().content, AnswerSource::BoxedInAnswerTag};
  }
  const auto anywhere = find_boxed(text);
  if (!anywhere.empty()) return {anywhere.back().content, AnswerSource::BoxedAnywhere};
  return {};
}

EquivalenceVerdict check_equivalence(std::string_view candidate, std::string_view ground_truth) {
  const MathExpr a = normalize(parse_math(candidate));
  const MathExpr b = normalize(parse_math(ground_truth));
  const bool a_opaque = a.kind == ExprKind::OpaqueText;
  const bool b_opaque = b.kind == ExprKind::OpaqueText;
  if (a_opaque || b_opaque) {
    const bool eq = normalize_answer_string(candidate) == normalize_answer_string(ground_truth);
    return {eq, a_opaque && b_opaque ? EquivalenceMethod::StringNormalized : EquivalenceMethod::Unparseable};
  }
  return compare_verdict(a, b);
}

bool answer_is_correct(std::string_view response, std::string_view ground_truth) {
  const ExtractedAnswer extracted = extract_boxed(response);
  if (extracted.source == AnswerSource::None) return false;
  return check_equivalence(extracted.raw, ground_truth).equivalent;
}

double accuracy_reward(std::string_view response, std::string_view ground_truth, RewardMode mode) {
  if (!answer_is_correct(response, ground_truth)) return 0.0;
  return mode == RewardMode::NoPriorPrompt ? 1.0 : 0.5;
}

}  // namespace rftkit
