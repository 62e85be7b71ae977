#include <benchmark/benchmark.h>

#include <string>

#include "rftkit/format_verifier.hpp"

namespace {

std::string response(std::size_t filler) {
  return "<think>" + std::string(filler, 'x') + "</think> then <answer>\\boxed{42}</answer>";
}

void BM_VerifyFormat(benchmark::State& state) {
  const auto text = response(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rftkit::verify_format(text, "think"));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_VerifyFormat)->Range(64, 64 << 10);

void BM_VerifyFormatTagSoup(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "<think>a</think><answer>b</answer></think><plan>";
  for (auto _ : state) benchmark::DoNotOptimize(rftkit::verify_format(text, "think"));
}
BENCHMARK(BM_VerifyFormatTagSoup)->Range(1, 1024);

}  // namespace
