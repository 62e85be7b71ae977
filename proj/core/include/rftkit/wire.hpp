#pragma once

// JSON encodings shared by the CLI and the HTTP service. One object per
// call, compact, no trailing newline.

#include <cstddef>
#include <string>
#include <string_view>

#include "rftkit/answer_engine.hpp"
#include "rftkit/behavior_lab.hpp"
#include "rftkit/eval_harness.hpp"
#include "rftkit/format_verifier.hpp"
#include "rftkit/reward_core.hpp"

namespace rftkit {

std::string to_json(const RewardScore& score);
std::string to_json(const FormatVerdict& verdict);
std::string to_json(const EquivalenceVerdict& verdict);
std::string to_json(const ClassificationResult& result);
std::string to_json(const BehaviorReport& report);
std::string to_json(const EvalResult& result);
std::string to_json(const GroupRewardStats& stats);

// Inverse readers for JSONL pipelines. Throw Error(SchemaViolation) with
// `line_no`.
RewardScore reward_score_from_json(std::string_view line, std::size_t line_no = 0);
ClassificationResult classification_from_json(std::string_view line, std::size_t line_no = 0);

}  // namespace rftkit
