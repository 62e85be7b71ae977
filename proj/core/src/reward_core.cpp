#include "rftkit/reward_core.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rftkit/answer_engine.hpp"
#include "rftkit/error.hpp"

namespace rftkit {

namespace {

constexpr std::size_t kParallelThreshold = 64;

}  // namespace

RewardMode reward_mode(PpeApproach approach) noexcept {
  return approach == PpeApproach::NoPriorPrompt ? RewardMode::NoPriorPrompt : RewardMode::Standard;
}

RewardScore score(std::string_view response, std::string_view ground_truth, PpeApproach approach) {
  const RewardMode mode = reward_mode(approach);
  RewardScore s;
  s.accuracy = accuracy_reward(response, ground_truth, mode);
  if (auto tag = expected_tag(approach)) {
    s.format = format_reward(verify_format(response, *tag), mode);
  }
  s.total = s.accuracy + s.format;
  return s;
}

std::vector<RewardScore> score_batch(std::span<const ScoreItem> items, PpeApproach approach,
                                     unsigned max_threads) {
  std::vector<RewardScore> out(items.size());
  unsigned workers = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  if (items.size() < kParallelThreshold) workers = 1;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, items.size()));

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = score(items[i].response, items[i].ground_truth, approach);
  };
  if (workers <= 1) {
    run(0, items.size());
    return out;
  }
  const std::size_t chunk = (items.size() + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t begin = 0; begin < items.size(); begin += chunk) {
    pool.emplace_back(run, begin, std::min(items.size(), begin + chunk));
  }
  return out;
}

std::vector<GroupRewardStats> group_stats(std::span<const double> rewards, std::size_t group_size) {
  if (group_size == 0) throw Error(ErrorCode::InvalidArgument, "group_size must be positive");
  if (rewards.size() % group_size != 0) {
    throw Error(ErrorCode::LengthNotDivisible, std::to_string(rewards.size()) +
                                                   " rewards do not split into groups of " +
                                                   std::to_string(group_size));
  }
  std::vector<GroupRewardStats> groups;
  groups.reserve(rewards.size() / group_size);
  for (std::size_t g = 0; g * group_size < rewards.size(); ++g) {
    GroupRewardStats s;
    s.group_id = g;
    s.rewards.assign(rewards.begin() + static_cast<std::ptrdiff_t>(g * group_size),
                     rewards.begin() + static_cast<std::ptrdiff_t>((g + 1) * group_size));
    const bool all_equal = std::all_of(s.rewards.begin(), s.rewards.end(),
                                       [&](double r) { return r == s.rewards.front(); });
    if (all_equal) {
      s.mean = s.rewards.front();
      s.advantages.assign(group_size, 0.0);
      groups.push_back(std::move(s));
      continue;
    }
    double sum = 0.0;
    for (double r : s.rewards) sum += r;
    s.mean = sum / static_cast<double>(group_size);
    double sq = 0.0;
    for (double r : s.rewards) sq += (r - s.mean) * (r - s.mean);
    s.std = std::sqrt(sq / static_cast<double>(group_size));
    s.advantages.reserve(group_size);
    for (double r : s.rewards) s.advantages.push_back((r - s.mean) / (s.std + kAdvantageEpsilon));
    groups.push_back(std::move(s));
  }
  return groups;
}

}  // namespace rftkit
