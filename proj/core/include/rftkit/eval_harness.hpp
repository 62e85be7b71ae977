#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rftkit/exact.hpp"
#include "rftkit/prompt_registry.hpp"
#include "rftkit/reward_core.hpp"

namespace rftkit {

enum class AnswerType { Numeric, MultipleChoice };

struct BenchmarkItem {
  std::string id;
  std::string question;
  std::string ground_truth;
  AnswerType answer_type = AnswerType::Numeric;
};

/// One JSONL line: {"id": str|int, "question": str, "answer": str,
/// "type": "numeric"|"mc"} ("type" defaults to numeric; other fields are
/// ignored). Throws Error(SchemaViolation) carrying `line_no`.
BenchmarkItem parse_benchmark_line(std::string_view line, std::size_t line_no);

/// Reads a whole benchmark, order preserved; blank lines are skipped and ids
/// must be unique. Throws Error(FileNotFound) / Error(SchemaViolation).
std::vector<BenchmarkItem> load_benchmark(const std::filesystem::path& path);
std::vector<BenchmarkItem> read_benchmark(std::istream& in);

struct TokenCounter {
  std::string name;
  std::function<std::size_t(std::string_view)> count;

  /// Whitespace-delimited words; a stand-in for the model tokenizer.
  static TokenCounter whitespace();
};

struct EvalResult {
  std::string benchmark;
  std::optional<PpeApproach> approach;
  std::size_t n_items = 0;
  std::size_t n_correct = 0;
  double accuracy_pct = 0.0;
  std::optional<double> avg_response_length;
  std::string length_method;
  std::optional<std::uint64_t> seed;
  std::vector<bool> correct;  // per item, input order

  /// 100 * n_correct / n_items, exactly.
  BigRational accuracy_exact() const;
};

/// Streaming pass@1 accumulator: feed (item, response) pairs in order.
class Evaluator {
 public:
  Evaluator(std::string benchmark, std::optional<PpeApproach> approach,
            TokenCounter counter = TokenCounter::whitespace());

  /// Returns whether the response's boxed answer matches the item.
  bool add(const BenchmarkItem& item, std::string_view response);
  std::size_t size() const noexcept { return correct_.size(); }
  /// Throws Error(EmptyBenchmark) when nothing was added.
  EvalResult finish() const;

 private:
  std::string benchmark_;
  std::optional<PpeApproach> approach_;
  TokenCounter counter_;
  std::vector<bool> correct_;
  std::uint64_t n_correct_ = 0;
  long double total_length_ = 0;
};

bool is_correct(const BenchmarkItem& item, std::string_view response);

/// pass@1 over parallel lists. Throws Error(LengthMismatch) naming both
/// counts, Error(EmptyBenchmark) for no items.
EvalResult evaluate(std::span<const std::string> responses, std::span<const BenchmarkItem> items,
                    PpeApproach approach, const TokenCounter& counter = TokenCounter::whitespace());

/// Accuracy from previously computed reward scores: an item is correct when
/// its accuracy component is positive.
EvalResult evaluate_scores(std::span<const RewardScore> scores, std::string benchmark);

/// Mean of counter(response). Throws Error(InvalidArgument) when empty.
double avg_response_length(std::span<const std::string> responses,
                           const TokenCounter& counter = TokenCounter::whitespace());

}  // namespace rftkit
