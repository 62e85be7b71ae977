#include <benchmark/benchmark.h>

#include "rftkit/answer_engine.hpp"

namespace {

void run(benchmark::State& state, const char* a, const char* b) {
  for (auto _ : state) benchmark::DoNotOptimize(rftkit::check_equivalence(a, b));
}

void BM_EquivInteger(benchmark::State& s) { run(s, "\\boxed{42}", "42"); }
void BM_EquivFraction(benchmark::State& s) { run(s, "\\frac{3}{4}", "0.75"); }
void BM_EquivNested(benchmark::State& s) {
  run(s, "\\frac{\\frac{1}{2}+\\frac{1}{3}}{\\left(2-\\frac{1}{6}\\right)^{2}}", "\\frac{30}{121}");
}
void BM_EquivRoot(benchmark::State& s) { run(s, "\\frac{\\sqrt{8}}{2}", "\\sqrt{2}"); }
void BM_EquivTuple(benchmark::State& s) { run(s, "(1, \\frac{1}{2}, 3)", "(1, 0.5, 3)"); }
void BM_EquivChoice(benchmark::State& s) { run(s, "(C)", "c"); }
void BM_EquivText(benchmark::State& s) { run(s, "\\text{no solution}", "No Solution"); }

BENCHMARK(BM_EquivInteger);
BENCHMARK(BM_EquivFraction);
BENCHMARK(BM_EquivNested);
BENCHMARK(BM_EquivRoot);
BENCHMARK(BM_EquivTuple);
BENCHMARK(BM_EquivChoice);
BENCHMARK(BM_EquivText);

void BM_ExtractBoxed(benchmark::State& state) {
  std::string text(static_cast<std::size_t>(state.range(0)), 'w');
  text += "\\boxed{\\frac{1}{2}}";
  for (auto _ : state) benchmark::DoNotOptimize(rftkit::extract_boxed(text));
}
BENCHMARK(BM_ExtractBoxed)->Range(64, 64 << 10);

}  // namespace
