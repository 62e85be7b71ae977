#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rftkit/format_verifier.hpp"
#include "rftkit/prompt_registry.hpp"

namespace rftkit {

/// Standard mode: accuracy and format are each 0 or 0.5.
/// No-prior-prompt mode: accuracy is 0 or 1, format is always 0.
struct RewardScore {
  double accuracy = 0.0;
  double format = 0.0;
  double total = 0.0;

  friend bool operator==(const RewardScore&, const RewardScore&) = default;
};

struct ScoreItem {
  std::string response;
  std::string ground_truth;
};

RewardMode reward_mode(PpeApproach approach) noexcept;

RewardScore score(std::string_view response, std::string_view ground_truth, PpeApproach approach);

/// Element-wise `score`, order preserved. Large batches are split across
/// `max_threads` workers (0 picks the hardware concurrency).
std::vector<RewardScore> score_batch(std::span<const ScoreItem> items, PpeApproach approach,
                                     unsigned max_threads = 0);

struct GroupRewardStats {
  std::size_t group_id = 0;
  std::vector<double> rewards;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  std::vector<double> advantages;
};

inline constexpr double kAdvantageEpsilon = 1e-8;

/// Splits `rewards` into consecutive groups of `group_size` and normalizes
/// each to advantages (r - mean) / (std + 1e-8). Throws
/// Error(LengthNotDivisible) or Error(InvalidArgument) for group_size 0.
std::vector<GroupRewardStats> group_stats(std::span<const double> rewards, std::size_t group_size);

}  // namespace rftkit
