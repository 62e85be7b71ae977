#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rftkit/exact.hpp"
#include "rftkit/prompt_registry.hpp"

namespace rftkit {

/// Reasoning behaviors counted per occurrence.
enum class CognitiveBehavior { Verification, Backtracking, SubgoalSetting, BackwardChaining };

/// Approach-specific behaviors, judged present or absent per response.
enum class ElicitedBehavior { Reasoning, Planning, CodeBasedReasoning, KnowledgeRecall, NullExampleUtilization };

using Behavior = std::variant<CognitiveBehavior, ElicitedBehavior>;

inline constexpr std::array<CognitiveBehavior, 4> kCognitiveBehaviors = {
    CognitiveBehavior::Verification, CognitiveBehavior::Backtracking, CognitiveBehavior::SubgoalSetting,
    CognitiveBehavior::BackwardChaining};

inline constexpr std::array<ElicitedBehavior, 5> kElicitedBehaviors = {
    ElicitedBehavior::Reasoning, ElicitedBehavior::Planning, ElicitedBehavior::CodeBasedReasoning,
    ElicitedBehavior::KnowledgeRecall, ElicitedBehavior::NullExampleUtilization};

/// "verification", "backtracking", "subgoal_setting", "backward_chaining",
/// "reasoning", "planning", "code_based_reasoning", "knowledge_recall",
/// "null_example_utilization".
std::string_view to_string(Behavior behavior) noexcept;
std::optional<Behavior> parse_behavior(std::string_view name) noexcept;
std::vector<Behavior> all_behaviors();

inline bool is_cognitive(const Behavior& b) noexcept { return std::holds_alternative<CognitiveBehavior>(b); }

/// Behavior a given approach is meant to instill; nullopt for NoPriorPrompt.
std::optional<ElicitedBehavior> elicited_behavior_for(PpeApproach approach) noexcept;

/// Classifier prompt that embeds `response` verbatim and demands a final line
/// `COUNT: <n>` (cognitive) or `PRESENT: yes|no` (elicited).
/// Throws Error(EmptyResponse).
std::string build_classifier_prompt(const Behavior& behavior, std::string_view response);

/// Value after the last `COUNT:` / `PRESENT:` marker in a classifier reply
/// (case-insensitive). nullopt when there is none or its value is malformed.
std::optional<std::uint64_t> parse_classifier_reply(const Behavior& behavior, std::string_view reply);

struct ClassificationRequest {
  std::size_t response_id = 0;
  Behavior behavior = CognitiveBehavior::Verification;
  std::string response;
};

struct ClassificationResult {
  std::size_t response_id = 0;
  Behavior behavior = CognitiveBehavior::Verification;
  /// Occurrence count (cognitive) or 0/1 (elicited); nullopt on parse failure.
  std::optional<std::uint64_t> value;
  std::string classifier_raw;

  bool parse_failed() const noexcept { return !value.has_value(); }
};

/// Chat-completion style endpoint, e.g.
/// https://api.openai.com/v1/chat/completions.
struct ClassifierEndpoint {
  std::string url;
  std::string api_key;
  std::string model = "gpt-4.1-mini-2025-04-14";
  double temperature = 0.0;
  unsigned max_in_flight = 8;
  unsigned max_retries = 4;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{120};

  /// CLASSIFIER_URL, CLASSIFIER_KEY, CLASSIFIER_MODEL. Throws
  /// Error(InvalidArgument) when CLASSIFIER_URL is unset.
  static ClassifierEndpoint from_env();
};

/// Sends one prompt per request, at most `max_in_flight` at a time, and
/// returns results in request order. Rate limits and server errors are
/// retried with exponential backoff. Throws Error(AuthFailure),
/// Error(RateLimited) or Error(EndpointUnreachable).
std::vector<ClassificationResult> classify(std::span<const ClassificationRequest> requests,
                                           const ClassifierEndpoint& endpoint);

struct BehaviorReport {
  std::size_t n_responses = 0;
  std::size_t n_results = 0;
  std::size_t n_parse_failures = 0;
  std::array<std::uint64_t, kCognitiveBehaviors.size()> cognitive_totals{};
  std::array<std::uint64_t, kElicitedBehaviors.size()> elicited_totals{};

  std::uint64_t total(const Behavior& behavior) const noexcept;
  /// total / n_responses, exactly.
  BigRational ratio(const Behavior& behavior) const;
  double ratio_value(const Behavior& behavior) const;
  /// Parse failures as a share of all results (0 when there are none).
  double parse_failure_rate() const noexcept;
};

/// Sums per-behavior values over `results`, skipping parse failures. Throws
/// Error(InvalidArgument) for n_responses == 0, an out-of-range response_id
/// or an elicited value above 1, and Error(DuplicateResult) when a
/// (response_id, behavior) pair repeats.
BehaviorReport aggregate(std::span<const ClassificationResult> results, std::size_t n_responses);

}  // namespace rftkit
