#include "rftkit/eval_harness.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <set>

#include <json.hpp>

#include "rftkit/answer_engine.hpp"
#include "rftkit/error.hpp"

namespace rftkit {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& message, std::size_t line_no) {
  throw Error(ErrorCode::SchemaViolation, message, line_no);
}

bool blank(std::string_view line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool is_choice_letter(std::string_view truth) {
  const MathExpr e = parse_math(truth);
  return e.kind == ExprKind::ChoiceLetter;
}

}  // namespace

BenchmarkItem parse_benchmark_line(std::string_view line, std::size_t line_no) {
  json doc;
  try {
    doc = json::parse(line);
  } catch (const json::parse_error& e) {
    schema_error(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!doc.is_object()) schema_error("expected a JSON object", line_no);

  BenchmarkItem item;
  auto id = doc.find("id");
  if (id == doc.end()) schema_error("missing field 'id'", line_no);
  if (id->is_string()) {
    item.id = id->get<std::string>();
  } else if (id->is_number_integer()) {
    item.id = std::to_string(id->get<long long>());
  } else {
    schema_error("field 'id' must be a string or integer", line_no);
  }

  auto text_field = [&](const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) schema_error(std::string("missing field '") + key + "'", line_no);
    if (!it->is_string()) schema_error(std::string("field '") + key + "' must be a string", line_no);
    return it->get<std::string>();
  };
  item.question = text_field("question");
  item.ground_truth = text_field("answer");
  if (blank(item.ground_truth)) schema_error("field 'answer' must be nonempty", line_no);

  if (auto type = doc.find("type"); type != doc.end()) {
    if (!type->is_string()) schema_error("field 'type' must be \"numeric\" or \"mc\"", line_no);
    const auto t = type->get<std::string>();
    if (t == "numeric") {
      item.answer_type = AnswerType::Numeric;
    } else if (t == "mc") {
      item.answer_type = AnswerType::MultipleChoice;
      if (!is_choice_letter(item.ground_truth)) {
        schema_error("multiple-choice answer must be a letter A-E, got '" + item.ground_truth + "'", line_no);
      }
    } else {
      schema_error("field 'type' must be \"numeric\" or \"mc\", got '" + t + "'", line_no);
    }
  }
  return item;
}

std::vector<BenchmarkItem> read_benchmark(std::istream& in) {
  std::vector<BenchmarkItem> items;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    BenchmarkItem item = parse_benchmark_line(line, line_no);
    if (!ids.insert(item.id).second) schema_error("duplicate id '" + item.id + "'", line_no);
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<BenchmarkItem> load_benchmark(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open benchmark file " + path.string());
  return read_benchmark(in);
}

TokenCounter TokenCounter::whitespace() {
  return {"whitespace", [](std::string_view text) {
            std::size_t count = 0;
            bool in_word = false;
            for (char c : text) {
              const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
              if (!space && !in_word) ++count;
              in_word = !space;
            }
            return count;
          }};
}

BigRational EvalResult::accuracy_exact() const {
  if (n_items == 0) return BigRational(0);
  return BigRational(BigInt(100 * n_correct), BigInt(n_items));
}

bool is_correct(const BenchmarkItem& item, std::string_view response) {
  return answer_is_correct(response, item.ground_truth);
}

Evaluator::Evaluator(std::string benchmark, std::optional<PpeApproach> approach, TokenCounter counter)
    : benchmark_(std::move(benchmark)), approach_(approach), counter_(std::move(counter)) {}

bool Evaluator::add(const BenchmarkItem& item, std::string_view response) {
  const bool ok = is_correct(item, response);
  correct_.push_back(ok);
  if (ok) ++n_correct_;
  total_length_ += static_cast<long double>(counter_.count(response));
  return ok;
}

EvalResult Evaluator::finish() const {
  if (correct_.empty()) throw Error(ErrorCode::EmptyBenchmark, "benchmark '" + benchmark_ + "' has no items");
  EvalResult r;
  r.benchmark = benchmark_;
  r.approach = approach_;
  r.n_items = correct_.size();
  r.n_correct = n_correct_;
  r.accuracy_pct = 100.0 * static_cast<double>(n_correct_) / static_cast<double>(r.n_items);
  r.avg_response_length = static_cast<double>(total_length_ / static_cast<long double>(r.n_items));
  r.length_method = counter_.name;
  r.correct = correct_;
  return r;
}

EvalResult evaluate(std::span<const std::string> responses, std::span<const BenchmarkItem> items,
                    PpeApproach approach, const TokenCounter& counter) {
  if (responses.size() != items.size()) {
    throw Error(ErrorCode::LengthMismatch, "got " + std::to_string(responses.size()) + " responses for " +
                                               std::to_string(items.size()) + " benchmark items");
  }
  Evaluator evaluator("", approach, counter);
  for (std::size_t i = 0; i < items.size(); ++i) evaluator.add(items[i], responses[i]);
  return evaluator.finish();
}

EvalResult evaluate_scores(std::span<const RewardScore> scores, std::string benchmark) {
  if (scores.empty()) throw Error(ErrorCode::EmptyBenchmark, "no scores to evaluate");
  EvalResult r;
  r.benchmark = std::move(benchmark);
  r.n_items = scores.size();
  for (const auto& s : scores) {
    r.correct.push_back(s.accuracy > 0.0);
    if (s.accuracy > 0.0) ++r.n_correct;
  }
  r.accuracy_pct = 100.0 * static_cast<double>(r.n_correct) / static_cast<double>(r.n_items);
  r.length_method = "unavailable";
  return r;
}

double avg_response_length(std::span<const std::string> responses, const TokenCounter& counter) {
  if (responses.empty()) throw Error(ErrorCode::InvalidArgument, "no responses to measure");
  long double total = 0;
  for (const auto& r : responses) total += static_cast<long double>(counter.count(r));
  return static_cast<double>(total / static_cast<long double>(responses.size()));
}

}  // namespace rftkit
