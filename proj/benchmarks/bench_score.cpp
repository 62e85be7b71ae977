#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "rftkit/reward_core.hpp"

namespace {

std::vector<rftkit::ScoreItem> batch(std::size_t n) {
  std::vector<rftkit::ScoreItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = std::to_string(i % 17);
    items.push_back({"<think>" + std::string(400, 'r') + "</think><answer>\\boxed{\\frac{" + v + "}{2}}</answer>",
                     i % 3 ? v + "/2" : "1"});
  }
  return items;
}

void BM_ScoreBatch(benchmark::State& state) {
  const auto items = batch(static_cast<std::size_t>(state.range(0)));
  const auto threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(rftkit::score_batch(items, rftkit::PpeApproach::Think, threads));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * items.size()));
}
BENCHMARK(BM_ScoreBatch)->ArgsProduct({{1, 64, 256, 1024}, {1, 0}})->UseRealTime();

void BM_GroupStats(benchmark::State& state) {
  std::vector<double> rewards(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < rewards.size(); ++i) rewards[i] = (i % 3) * 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(rftkit::group_stats(rewards, 8));
}
BENCHMARK(BM_GroupStats)->Arg(1024);

}  // namespace
