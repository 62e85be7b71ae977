#include "rftkit/reward_service.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rftkit/answer_engine.hpp"
#include "rftkit/error.hpp"
#include "rftkit/format_verifier.hpp"
#include "rftkit/reward_core.hpp"

#ifndef RFTKIT_VERSION
#define RFTKIT_VERSION "0.0.0"
#endif

namespace rftkit {

namespace {

using nlohmann::json;

// A client error with the JSON pointer of the offending field.
struct RequestError {
  int status;
  std::string code;
  std::string message;
  std::string field;
};

json error_body(const RequestError& e) {
  json err{{"code", e.code}, {"message", e.message}};
  if (!e.field.empty()) err["field"] = e.field;
  return json{{"version", kServiceSchemaVersion}, {"error", err}};
}

[[noreturn]] void reject(std::string field, std::string message) {
  throw RequestError{400, "schema_violation", std::move(message), std::move(field)};
}

// Strict object reader: every key must be claimed, unknown ones are errors.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) reject(path_.empty() ? "/" : path_, "expected an object");
  }

  const json& required(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) reject(path_ + "/" + key, std::string("missing field '") + key + "'");
    return *it;
  }

  const json* optional(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  std::string string(const char* key) {
    const json& v = required(key);
    if (!v.is_string()) reject(path_ + "/" + key, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) reject(path_ + "/" + it.key(), "unknown field '" + it.key() + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void check_version(Fields& f) {
  if (const json* v = f.optional("version")) {
    if (!v->is_string() || v->get<std::string>() != kServiceSchemaVersion) {
      reject("/version", "unsupported schema version, expected '" + std::string(kServiceSchemaVersion) + "'");
    }
  }
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    reject("", std::string("invalid JSON: ") + e.what());
  }
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

}  // namespace

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig c;
  if (const char* bind = std::getenv("BIND_ADDR"); bind && *bind) {
    std::string_view s(bind);
    const auto colon = s.rfind(':');
    if (colon == std::string_view::npos) {
      c.host = std::string(s);
    } else {
      c.host = std::string(s.substr(0, colon));
      const auto port = s.substr(colon + 1);
      int value = -1;
      auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
      if (ec != std::errc() || p != port.data() + port.size() || value < 0 || value > 65535) {
        throw Error(ErrorCode::InvalidArgument, "BIND_ADDR has an invalid port: " + std::string(s));
      }
      c.port = value;
    }
    if (c.host.empty()) c.host = "0.0.0.0";
  }
  if (const char* max = std::getenv("MAX_BATCH"); max && *max) {
    std::string_view s(max);
    std::size_t value = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || p != s.data() + s.size() || value == 0) {
      throw Error(ErrorCode::InvalidArgument, "MAX_BATCH must be a positive integer, got '" + std::string(s) + "'");
    }
    c.max_batch = value;
  }
  if (const char* token = std::getenv("AUTH_TOKEN"); token && *token) c.auth_token = token;
  return c;
}

struct RewardService::Impl {
  ServiceConfig config;
  std::string template_checksum;
  httplib::Server server;
  std::thread thread;
  std::mutex log_mutex;

  ServiceResponse dispatch(std::string_view method, std::string_view path, std::string_view body,
                           std::string_view authorization) const;
  json score(const json& req) const;
  json format(const json& req) const;
  json equivalence(const json& req) const;
  void bind();
  void log(const httplib::Request& req, const httplib::Response& res, double ms);
};

json RewardService::Impl::score(const json& req) const {
  Fields f(req, "");
  check_version(f);
  const std::string approach_name = f.string("approach");
  const auto approach = parse_approach(approach_name);
  if (!approach) reject("/approach", "unknown approach '" + approach_name + "'");

  const json& items = f.required("items");
  if (!items.is_array()) reject("/items", "field 'items' must be an array");
  if (items.empty()) reject("/items", "items must be nonempty");
  if (items.size() > config.max_batch) {
    throw RequestError{413, "batch_too_large",
                       "batch of " + std::to_string(items.size()) + " items exceeds the limit of " +
                           std::to_string(config.max_batch),
                       "/items"};
  }
  f.finish();

  std::vector<ScoreItem> batch;
  batch.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    Fields item(items[i], "/items/" + std::to_string(i));
    ScoreItem s;
    s.response = item.string("response");
    s.ground_truth = item.string("ground_truth");
    item.finish();
    batch.push_back(std::move(s));
  }

  json rewards = json::array();
  for (const auto& r : score_batch(batch, *approach)) {
    rewards.push_back({{"accuracy", r.accuracy}, {"format", r.format}, {"total", r.total}});
  }
  return json{{"version", kServiceSchemaVersion}, {"rewards", std::move(rewards)}};
}

json RewardService::Impl::format(const json& req) const {
  Fields f(req, "");
  check_version(f);
  const std::string response = f.string("response");
  const std::string tag = f.string("tag");
  f.finish();
  FormatVerdict verdict;
  try {
    verdict = verify_format(response, tag);
  } catch (const Error& e) {
    reject("/tag", e.what());
  }
  json violations = json::array();
  for (auto v : verdict.violations) violations.push_back(std::string(to_string(v)));
  return json{{"version", kServiceSchemaVersion}, {"passed", verdict.passed}, {"violations", violations}};
}

json RewardService::Impl::equivalence(const json& req) const {
  Fields f(req, "");
  check_version(f);
  const std::string a = f.string("a");
  const std::string b = f.string("b");
  f.finish();
  const auto verdict = check_equivalence(a, b);
  return json{{"version", kServiceSchemaVersion},
              {"equivalent", verdict.equivalent},
              {"method", std::string(to_string(verdict.method))}};
}

ServiceResponse RewardService::Impl::dispatch(std::string_view method, std::string_view path, std::string_view body,
                                              std::string_view authorization) const {
  try {
    if (path == "/healthz") {
      if (method != "GET") throw RequestError{405, "method_not_allowed", "use GET", ""};
      return {200, json{{"status", "ok"},
                        {"version", kServiceSchemaVersion},
                        {"build", RFTKIT_VERSION},
                        {"template_checksum", template_checksum}}
                       .dump()};
    }

    using Handler = json (Impl::*)(const json&) const;
    Handler handler = nullptr;
    if (path == "/v1/score") {
      handler = &Impl::score;
    } else if (path == "/v1/format") {
      handler = &Impl::format;
    } else if (path == "/v1/equivalence") {
      handler = &Impl::equivalence;
    } else {
      throw RequestError{404, "not_found", "no route for " + std::string(path), ""};
    }
    if (config.auth_token && authorization != "Bearer " + *config.auth_token) {
      throw RequestError{401, "unauthorized", "missing or wrong bearer token", ""};
    }
    if (method != "POST") throw RequestError{405, "method_not_allowed", "use POST", ""};
    if (body.size() > config.max_body_bytes) {
      throw RequestError{413, "body_too_large",
                         "request body exceeds " + std::to_string(config.max_body_bytes) + " bytes", ""};
    }
    return {200, (this->*handler)(parse_body(body)).dump()};
  } catch (const RequestError& e) {
    return {e.status, error_body(e).dump()};
  } catch (const std::exception& e) {
    return {500, error_body({500, "internal", e.what(), ""}).dump()};
  }
}

void RewardService::Impl::log(const httplib::Request& req, const httplib::Response& res, double ms) {
  if (!config.request_log) return;
  const json line{{"ts", now_iso8601()},   {"method", req.method},          {"path", req.path},
                  {"status", res.status},  {"duration_ms", ms},             {"request_bytes", req.body.size()},
                  {"remote", req.remote_addr}};
  std::lock_guard lock(log_mutex);
  std::cerr << line.dump() << '\n';
}

void RewardService::Impl::bind() {
  server.set_payload_max_length(config.max_body_bytes);
  server.set_tcp_nodelay(true);
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const auto start = std::chrono::steady_clock::now();
    const auto out = dispatch(req.method, req.path, req.body, req.get_header_value("Authorization"));
    res.status = out.status;
    res.set_content(out.body, "application/json");
    const std::chrono::duration<double, std::milli> elapsed = std::chrono::steady_clock::now() - start;
    log(req, res, elapsed.count());
  };
  server.Get(R"(/.*)", route);
  server.Post(R"(/.*)", route);
  server.Put(R"(/.*)", route);
  server.Delete(R"(/.*)", route);
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    // httplib rejects oversized payloads itself; give them our error shape
    if (res.body.empty()) {
      const std::string code = res.status == 413 ? "body_too_large" : "http_error";
      res.set_content(error_body({res.status, code, httplib::status_message(res.status), ""}).dump(),
                      "application/json");
    }
  });

  bool ok = false;
  if (config.port == 0) {
    const int port = server.bind_to_any_port(config.host);
    ok = port > 0;
    if (ok) config.port = port;
  } else {
    ok = server.bind_to_port(config.host, config.port);
  }
  if (!ok) {
    throw Error(ErrorCode::EndpointUnreachable,
                "cannot bind " + config.host + ":" + std::to_string(config.port));
  }
}

RewardService::RewardService(ServiceConfig config, const PromptRegistry& registry) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->template_checksum = registry.checksum();
}

RewardService::~RewardService() { stop(); }

ServiceResponse RewardService::handle(std::string_view method, std::string_view path, std::string_view body,
                                      std::string_view authorization) const {
  return impl_->dispatch(method, path, body, authorization);
}

int RewardService::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->config.port;
}

void RewardService::serve() {
  impl_->bind();
  impl_->server.listen_after_bind();
}

void RewardService::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

const ServiceConfig& RewardService::config() const noexcept { return impl_->config; }

}  // namespace rftkit
