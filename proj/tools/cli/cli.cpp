#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rftkit/answer_engine.hpp"
#include "rftkit/behavior_lab.hpp"
#include "rftkit/error.hpp"
#include "rftkit/eval_harness.hpp"
#include "rftkit/format_verifier.hpp"
#include "rftkit/prompt_registry.hpp"
#include "rftkit/reward_core.hpp"
#include "rftkit/reward_service.hpp"
#include "rftkit/tables.hpp"
#include "rftkit/wire.hpp"

namespace rftkit::cli {

namespace {

using nlohmann::json;

constexpr std::size_t kChunk = 1024;

enum class OutFormat { Json, Csv, Markdown };

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
  OutFormat format = OutFormat::Json;
  std::optional<std::uint64_t> seed;
  std::string templates_path;
};

// Owns a file stream, or borrows the caller's stdin for "-".
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw Error(ErrorCode::FileNotFound, "cannot open " + path);
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

std::string read_all(const std::string& path, std::istream& fallback) {
  Input input(path, fallback);
  std::ostringstream ss;
  ss << input.get().rdbuf();
  return ss.str();
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

json parse_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what(), line_no);
  }
}

std::string string_field(const json& doc, const char* key, std::size_t line_no) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw Error(ErrorCode::SchemaViolation, std::string("field '") + key + "' must be a string", line_no);
  }
  return it->get<std::string>();
}

// A response line is either a bare JSON string or {"response": str, ...}.
std::string response_text(const json& doc, std::size_t line_no) {
  if (doc.is_string()) return doc.get<std::string>();
  if (doc.is_object()) return string_field(doc, "response", line_no);
  throw Error(ErrorCode::SchemaViolation, "expected a string or an object with 'response'", line_no);
}

PpeApproach approach_arg(const std::string& name) {
  auto a = parse_approach(name);
  if (!a) throw CLI::ValidationError("--approach", "unknown approach '" + name + "'");
  return *a;
}

const PromptRegistry& registry(const Context& ctx, std::optional<PromptRegistry>& storage) {
  if (ctx.templates_path.empty()) return PromptRegistry::builtin();
  storage = PromptRegistry::from_file(ctx.templates_path);
  return *storage;
}

// Key/value record output shared by eval and similar single-row results.
void emit_record(const Context& ctx, const std::vector<std::pair<std::string, std::string>>& fields,
                 const std::string& json_text) {
  switch (ctx.format) {
    case OutFormat::Json:
      ctx.out << json_text << '\n';
      break;
    case OutFormat::Csv: {
      for (std::size_t i = 0; i < fields.size(); ++i) ctx.out << (i ? "," : "") << fields[i].first;
      ctx.out << '\n';
      for (std::size_t i = 0; i < fields.size(); ++i) ctx.out << (i ? "," : "") << fields[i].second;
      ctx.out << '\n';
      break;
    }
    case OutFormat::Markdown: {
      ctx.out << "|";
      for (const auto& f : fields) ctx.out << ' ' << f.first << " |";
      ctx.out << "\n|";
      for (std::size_t i = 0; i < fields.size(); ++i) ctx.out << "---|";
      ctx.out << "\n|";
      for (const auto& f : fields) ctx.out << ' ' << f.second << " |";
      ctx.out << '\n';
      break;
    }
  }
}

// ---- prompts ----

struct PromptsArgs {
  std::string approach = "think";
  std::string question;
  std::string question_file;
};

void cmd_prompts_render(const Context& ctx, const PromptsArgs& a) {
  std::optional<PromptRegistry> storage;
  const auto& reg = registry(ctx, storage);
  std::string question = a.question;
  if (!a.question_file.empty()) question = read_all(a.question_file, ctx.in);
  const std::string prompt = render_prompt(reg.get(approach_arg(a.approach)), question);
  if (ctx.format == OutFormat::Json) {
    ctx.out << json{{"approach", a.approach}, {"prompt", prompt}}.dump() << '\n';
  } else {
    ctx.out << prompt << '\n';
  }
}

void cmd_prompts_export(const Context& ctx) {
  std::optional<PromptRegistry> storage;
  ctx.out << registry(ctx, storage).to_json() << '\n';
}

// ---- verify-format / equiv ----

struct VerifyArgs {
  std::string tag;
  std::string file = "-";
  std::optional<std::string> text;
};

void cmd_verify_format(const Context& ctx, const VerifyArgs& a) {
  const std::string text = a.text ? *a.text : read_all(a.file, ctx.in);
  const FormatVerdict v = verify_format(text, a.tag);
  std::string violations;
  for (auto code : v.violations) violations += (violations.empty() ? "" : ";") + std::string(to_string(code));
  emit_record(ctx, {{"passed", v.passed ? "true" : "false"}, {"violations", violations}}, to_json(v));
}

struct EquivArgs {
  std::string candidate;
  std::string truth;
};

void cmd_equiv(const Context& ctx, const EquivArgs& a) {
  const EquivalenceVerdict v = check_equivalence(a.candidate, a.truth);
  emit_record(ctx, {{"equivalent", v.equivalent ? "true" : "false"}, {"method", std::string(to_string(v.method))}},
              to_json(v));
}

// ---- score ----

struct ScoreArgs {
  std::string approach;
  std::string input = "-";
  std::size_t group_size = 0;
};

void cmd_score(const Context& ctx, const ScoreArgs& a) {
  const PpeApproach approach = approach_arg(a.approach);
  Input input(a.input, ctx.in);
  // keep groups whole inside a chunk
  const std::size_t chunk = a.group_size ? a.group_size * std::max<std::size_t>(1, kChunk / a.group_size) : kChunk;

  std::vector<ScoreItem> batch;
  std::size_t group_base = 0;
  auto flush = [&] {
    if (batch.empty()) return;
    const auto scores = score_batch(batch, approach);
    if (a.group_size == 0) {
      for (const auto& s : scores) ctx.out << to_json(s) << '\n';
    } else {
      std::vector<double> totals;
      for (const auto& s : scores) totals.push_back(s.total);
      for (auto g : group_stats(totals, a.group_size)) {
        g.group_id += group_base;
        ctx.out << to_json(g) << '\n';
      }
      group_base += totals.size() / a.group_size;
    }
    batch.clear();
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input.get(), line)) {
    ++line_no;
    if (blank(line)) continue;
    const json doc = parse_line(line, line_no);
    if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "expected a JSON object", line_no);
    batch.push_back({string_field(doc, "response", line_no), string_field(doc, "ground_truth", line_no)});
    if (batch.size() == chunk) flush();
  }
  flush();
}

// ---- eval ----

struct EvalArgs {
  std::string bench;
  std::string responses;
  std::string approach = "none";
  std::string name;
  std::string from_scores;
};

void emit_eval(const Context& ctx, EvalResult r) {
  r.seed = ctx.seed;
  auto fmt_len = [&] {
    if (!r.avg_response_length) return std::string();
    return format_fixed(from_double_shortest(*r.avg_response_length), 2);
  };
  emit_record(ctx,
              {{"benchmark", r.benchmark},
               {"approach", r.approach ? std::string(to_string(*r.approach)) : ""},
               {"n_items", std::to_string(r.n_items)},
               {"n_correct", std::to_string(r.n_correct)},
               {"accuracy_pct", format_fixed(r.accuracy_exact(), 2)},
               {"avg_response_length", fmt_len()},
               {"length_method", r.length_method},
               {"seed", r.seed ? std::to_string(*r.seed) : ""}},
              to_json(r));
}

std::string stem_of(const std::string& path) {
  if (path == "-") return "stdin";
  return std::filesystem::path(path).stem().string();
}

void cmd_eval(const Context& ctx, const EvalArgs& a) {
  if (!a.from_scores.empty()) {
    Input input(a.from_scores, ctx.in);
    std::vector<RewardScore> scores;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input.get(), line)) {
      ++line_no;
      if (!blank(line)) scores.push_back(reward_score_from_json(line, line_no));
    }
    emit_eval(ctx, evaluate_scores(scores, a.name.empty() ? stem_of(a.from_scores) : a.name));
    return;
  }
  if (a.bench.empty() || a.responses.empty()) {
    throw CLI::RequiredError("eval needs --bench and --responses, or --from-scores");
  }
  const PpeApproach approach = approach_arg(a.approach);
  const auto items = load_benchmark(a.bench);
  Input input(a.responses, ctx.in);
  Evaluator evaluator(a.name.empty() ? stem_of(a.bench) : a.name, approach);

  std::string line;
  std::size_t line_no = 0;
  std::size_t n_responses = 0;
  while (std::getline(input.get(), line)) {
    ++line_no;
    if (blank(line)) continue;
    const json doc = parse_line(line, line_no);
    const std::string response = response_text(doc, line_no);
    if (n_responses < items.size()) {
      const auto& item = items[n_responses];
      if (doc.is_object() && doc.contains("id")) {
        const json& id = doc["id"];
        const std::string got = id.is_string() ? id.get<std::string>() : id.dump();
        if (got != item.id) {
          throw Error(ErrorCode::SchemaViolation,
                      "response id '" + got + "' does not match benchmark id '" + item.id + "'", line_no);
        }
      }
      evaluator.add(item, response);
    }
    ++n_responses;
  }
  if (n_responses != items.size()) {
    throw Error(ErrorCode::LengthMismatch, "got " + std::to_string(n_responses) + " responses for " +
                                               std::to_string(items.size()) + " benchmark items");
  }
  emit_eval(ctx, evaluator.finish());
}

// ---- behaviors ----

struct ClassifyArgs {
  std::string input = "-";
  std::vector<std::string> behaviors;
  std::string url;
  std::string model;
  unsigned max_in_flight = 0;
};

std::vector<Behavior> behavior_list(const std::vector<std::string>& names) {
  std::vector<Behavior> out;
  for (const auto& n : names) {
    if (n == "all") {
      for (const auto& b : all_behaviors()) out.push_back(b);
    } else if (n == "cognitive") {
      for (auto b : kCognitiveBehaviors) out.emplace_back(b);
    } else if (n == "elicited") {
      for (auto b : kElicitedBehaviors) out.emplace_back(b);
    } else if (auto b = parse_behavior(n)) {
      out.push_back(*b);
    } else {
      throw CLI::ValidationError("--behavior", "unknown behavior '" + n + "'");
    }
  }
  return out;
}

void cmd_behaviors_classify(const Context& ctx, const ClassifyArgs& a) {
  const auto behaviors = behavior_list(a.behaviors);
  ClassifierEndpoint endpoint;
  if (a.url.empty()) {
    endpoint = ClassifierEndpoint::from_env();
  } else {
    if (std::getenv("CLASSIFIER_URL")) endpoint = ClassifierEndpoint::from_env();
    endpoint.url = a.url;
    if (const char* key = std::getenv("CLASSIFIER_KEY")) endpoint.api_key = key;
  }
  if (!a.model.empty()) endpoint.model = a.model;
  if (a.max_in_flight) endpoint.max_in_flight = a.max_in_flight;

  Input input(a.input, ctx.in);
  std::vector<ClassificationRequest> batch;
  auto flush = [&] {
    for (const auto& r : classify(batch, endpoint)) ctx.out << to_json(r) << '\n';
    batch.clear();
  };
  std::string line;
  std::size_t line_no = 0;
  std::size_t response_id = 0;
  while (std::getline(input.get(), line)) {
    ++line_no;
    if (blank(line)) continue;
    const std::string response = response_text(parse_line(line, line_no), line_no);
    for (const auto& b : behaviors) batch.push_back({response_id, b, response});
    ++response_id;
    if (batch.size() >= kChunk) flush();
  }
  flush();
}

struct AggregateArgs {
  std::string input = "-";
  std::size_t n_responses = 0;
};

void cmd_behaviors_aggregate(const Context& ctx, const AggregateArgs& a) {
  Input input(a.input, ctx.in);
  std::vector<ClassificationResult> results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input.get(), line)) {
    ++line_no;
    if (!blank(line)) results.push_back(classification_from_json(line, line_no));
  }
  const BehaviorReport report = aggregate(results, a.n_responses);
  if (ctx.format == OutFormat::Json) {
    json j = json::parse(to_json(report));
    j["seed"] = ctx.seed ? json(*ctx.seed) : json(nullptr);
    ctx.out << j.dump() << '\n';
    return;
  }
  const bool csv = ctx.format == OutFormat::Csv;
  ctx.out << (csv ? "behavior,kind,total,ratio\n" : "| behavior | kind | total | ratio |\n|---|---|---:|---:|\n");
  for (const auto& b : all_behaviors()) {
    const std::string kind = is_cognitive(b) ? "cognitive" : "elicited";
    const std::string ratio = format_fixed(report.ratio(b), 4);
    if (csv) {
      ctx.out << to_string(b) << ',' << kind << ',' << report.total(b) << ',' << ratio << '\n';
    } else {
      ctx.out << "| " << to_string(b) << " | " << kind << " | " << report.total(b) << " | " << ratio << " |\n";
    }
  }
}

// ---- table ----

struct TableArgs {
  std::string input = "-";
  std::string columns = "accuracy";
  std::string base;
};

std::vector<TableRow> table_rows(const Context& ctx, const TableArgs& a) {
  std::vector<std::string> cols;
  if (a.columns == "accuracy") {
    cols = kAccuracyColumns;
  } else if (a.columns == "length") {
    cols = kLengthColumns;
  } else {
    cols = CLI::detail::split(a.columns, ',');
  }
  Input input(a.input, ctx.in);
  std::vector<TableRow> rows;
  for (const auto& r : read_table_inputs(input.get())) rows.push_back(summary_row(r.label, r.cells, cols));
  return rows;
}

TableFormat table_format(OutFormat f) {
  switch (f) {
    case OutFormat::Csv: return TableFormat::Csv;
    case OutFormat::Markdown: return TableFormat::Markdown;
    case OutFormat::Json: break;
  }
  return TableFormat::Json;
}

void cmd_table_summary(const Context& ctx, const TableArgs& a) {
  ctx.out << render_table(table_rows(ctx, a), table_format(ctx.format));
}

void cmd_table_delta(const Context& ctx, const TableArgs& a) {
  auto rows = table_rows(ctx, a);
  if (rows.empty()) throw Error(ErrorCode::EmptyBenchmark, "no table rows to compare");
  std::size_t base_index = 0;
  if (!a.base.empty()) {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& r) { return r.label == a.base; });
    if (it == rows.end()) throw Error(ErrorCode::MissingColumn, "no row labelled '" + a.base + "'");
    base_index = static_cast<std::size_t>(it - rows.begin());
  }
  const TableRow base = rows[base_index];
  rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(base_index));
  ctx.out << render_table(delta_table(base, rows), table_format(ctx.format), true);
}

// ---- serve ----

struct ServeArgs {
  std::string bind;
  std::size_t max_batch = 0;
  bool quiet = false;
};

void cmd_serve(const Context& ctx, const ServeArgs& a) {
  std::optional<PromptRegistry> storage;
  const auto& reg = registry(ctx, storage);
  ServiceConfig config = ServiceConfig::from_env();
  if (!a.bind.empty()) {
    // reuse the env parser for host:port
    ::setenv("BIND_ADDR", a.bind.c_str(), 1);
    const auto parsed = ServiceConfig::from_env();
    config.host = parsed.host;
    config.port = parsed.port;
  }
  if (a.max_batch) config.max_batch = a.max_batch;
  config.request_log = !a.quiet;

  // block the signals before any thread starts, then wait for one
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  RewardService service(config, reg);
  const int port = service.start();
  ctx.err << "listening on " << config.host << ':' << port << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  service.stop();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"rftkit: verifiable rewards, prior prompts and behavior analytics"};
  app.name("rftkit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kServiceSchemaVersion));

  Context ctx{out, err, in, OutFormat::Json, std::nullopt, {}};
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::string templates;
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "markdown"}))
      ->capture_default_str();
  app.add_option("--seed", seed, "Recorded in outputs for provenance");
  app.add_option("--templates", templates, "Prior-prompt template file overriding the built-ins");

  std::function<void()> action;

  PromptsArgs prompts;
  auto* prompts_cmd = app.add_subcommand("prompts", "Prior-prompt templates");
  prompts_cmd->require_subcommand(1);
  auto* render = prompts_cmd->add_subcommand("render", "Render the prompt for one question");
  render->add_option("--approach", prompts.approach)->capture_default_str();
  auto* q = render->add_option("--question", prompts.question);
  auto* qf = render->add_option("--question-file", prompts.question_file);
  q->excludes(qf);
  render->callback([&] { action = [&] { cmd_prompts_render(ctx, prompts); }; });
  auto* export_cmd = prompts_cmd->add_subcommand("export", "Print the template registry as JSON");
  export_cmd->callback([&] { action = [&] { cmd_prompts_export(ctx); }; });

  VerifyArgs verify;
  auto* vf = app.add_subcommand("verify-format", "Check the tag layout of one response");
  vf->add_option("--tag", verify.tag)->required();
  auto* vfile = vf->add_option("--file", verify.file, "Response file, - for stdin")->capture_default_str();
  vf->add_option("--text", verify.text)->excludes(vfile);
  vf->callback([&] { action = [&] { cmd_verify_format(ctx, verify); }; });

  EquivArgs equiv;
  auto* eq = app.add_subcommand("equiv", "Compare two answers");
  eq->add_option("--candidate", equiv.candidate)->required();
  eq->add_option("--truth", equiv.truth)->required();
  eq->callback([&] { action = [&] { cmd_equiv(ctx, equiv); }; });

  ScoreArgs score_args;
  auto* sc = app.add_subcommand("score", "Score JSONL {response, ground_truth} pairs");
  sc->add_option("--approach", score_args.approach)->required();
  sc->add_option("--in", score_args.input)->capture_default_str();
  sc->add_option("--group-size", score_args.group_size, "Emit per-group advantages instead of scores");
  sc->callback([&] { action = [&] { cmd_score(ctx, score_args); }; });

  EvalArgs eval_args;
  auto* ev = app.add_subcommand("eval", "pass@1 accuracy over a benchmark");
  ev->add_option("--bench", eval_args.bench);
  ev->add_option("--responses", eval_args.responses);
  ev->add_option("--approach", eval_args.approach)->capture_default_str();
  ev->add_option("--name", eval_args.name, "Benchmark name, defaults to the file stem");
  ev->add_option("--from-scores", eval_args.from_scores, "JSONL output of `score`");
  ev->callback([&] { action = [&] { cmd_eval(ctx, eval_args); }; });

  auto* beh = app.add_subcommand("behaviors", "Behavior classification");
  beh->require_subcommand(1);
  ClassifyArgs classify_args;
  auto* cl = beh->add_subcommand("classify", "Send responses to an LLM classifier");
  cl->add_option("--in", classify_args.input)->capture_default_str();
  cl->add_option("--behavior", classify_args.behaviors, "Names, or all / cognitive / elicited")
      ->required()
      ->delimiter(',');
  cl->add_option("--url", classify_args.url, "Overrides CLASSIFIER_URL");
  cl->add_option("--model", classify_args.model, "Overrides CLASSIFIER_MODEL");
  cl->add_option("--max-in-flight", classify_args.max_in_flight);
  cl->callback([&] { action = [&] { cmd_behaviors_classify(ctx, classify_args); }; });
  AggregateArgs agg;
  auto* ag = beh->add_subcommand("aggregate", "Totals and ratios from classification JSONL");
  ag->add_option("--in", agg.input)->capture_default_str();
  ag->add_option("--n", agg.n_responses, "Number of responses classified")->required();
  ag->callback([&] { action = [&] { cmd_behaviors_aggregate(ctx, agg); }; });

  auto* table = app.add_subcommand("table", "Summary and delta tables");
  table->require_subcommand(1);
  TableArgs table_args;
  auto add_table_opts = [&](CLI::App* c) {
    c->add_option("--in", table_args.input)->capture_default_str();
    c->add_option("--columns", table_args.columns, "accuracy, length or a comma list")->capture_default_str();
  };
  auto* ts = table->add_subcommand("summary", "Rows with an Avg column");
  add_table_opts(ts);
  ts->callback([&] { action = [&] { cmd_table_summary(ctx, table_args); }; });
  auto* td = table->add_subcommand("delta", "Signed change of every row against a base row");
  add_table_opts(td);
  td->add_option("--base", table_args.base, "Base row label, defaults to the first row");
  td->callback([&] { action = [&] { cmd_table_delta(ctx, table_args); }; });

  ServeArgs serve_args;
  auto* sv = app.add_subcommand("serve", "Run the reward HTTP service");
  sv->add_option("--bind", serve_args.bind, "host:port, overrides BIND_ADDR");
  sv->add_option("--max-batch", serve_args.max_batch, "Overrides MAX_BATCH");
  sv->add_flag("--quiet", serve_args.quiet, "No request log");
  sv->callback([&] { action = [&] { cmd_serve(ctx, serve_args); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  ctx.format = format == "csv" ? OutFormat::Csv : format == "markdown" ? OutFormat::Markdown : OutFormat::Json;
  ctx.seed = seed;
  ctx.templates_path = templates;

  try {
    action();
    out.flush();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace rftkit::cli
