#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "rftkit/behavior_lab.hpp"
#include "rftkit/error.hpp"

namespace rftkit {

namespace {

using nlohmann::json;

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "classifier URL must include a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string reply_text(const std::string& body) {
  try {
    const json doc = json::parse(body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
  } catch (const json::exception&) {
  }
  return body;
}

class Worker {
 public:
  Worker(const ClassifierEndpoint& endpoint, const SplitUrl& url) : endpoint_(endpoint), url_(url), client_(url.origin) {
    client_.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout).count());
    client_.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout).count());
    client_.set_write_timeout(std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout).count());
    if (!endpoint.api_key.empty()) client_.set_bearer_token_auth(endpoint.api_key);
  }

  ClassificationResult run(const ClassificationRequest& request) {
    const json body = {
        {"model", endpoint_.model},
        {"temperature", endpoint_.temperature},
        {"messages", json::array({{{"role", "user"}, {"content", build_classifier_prompt(request.behavior, request.response)}}})},
    };
    const std::string payload = body.dump();
    auto backoff = endpoint_.initial_backoff;
    std::string last_problem;
    bool rate_limited = false;
    for (unsigned attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      auto res = client_.Post(url_.path, payload, "application/json");
      if (!res) {
        last_problem = "connection failed: " + httplib::to_string(res.error());
        rate_limited = false;
        continue;
      }
      if (res->status == 401 || res->status == 403) {
        throw Error(ErrorCode::AuthFailure, "classifier endpoint rejected credentials (HTTP " +
                                                std::to_string(res->status) + ")");
      }
      if (res->status == 429) {
        last_problem = "rate limited (HTTP 429)";
        rate_limited = true;
        continue;
      }
      if (res->status >= 500) {
        last_problem = "server error (HTTP " + std::to_string(res->status) + ")";
        rate_limited = false;
        continue;
      }
      if (res->status != 200) {
        throw Error(ErrorCode::EndpointUnreachable,
                    "classifier endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body);
      }
      ClassificationResult result;
      result.response_id = request.response_id;
      result.behavior = request.behavior;
      result.classifier_raw = reply_text(res->body);
      result.value = parse_classifier_reply(request.behavior, result.classifier_raw);
      return result;
    }
    const std::string message = "gave up after " + std::to_string(endpoint_.max_retries + 1) + " attempts: " + last_problem;
    throw Error(rate_limited ? ErrorCode::RateLimited : ErrorCode::EndpointUnreachable, message);
  }

 private:
  const ClassifierEndpoint& endpoint_;
  const SplitUrl& url_;
  httplib::Client client_;
};

}  // namespace

ClassifierEndpoint ClassifierEndpoint::from_env() {
  ClassifierEndpoint endpoint;
  const char* url = std::getenv("CLASSIFIER_URL");
  if (url == nullptr || *url == '\0') {
    throw Error(ErrorCode::InvalidArgument, "CLASSIFIER_URL is not set");
  }
  endpoint.url = url;
  if (const char* key = std::getenv("CLASSIFIER_KEY")) endpoint.api_key = key;
  if (const char* model = std::getenv("CLASSIFIER_MODEL"); model != nullptr && *model != '\0') {
    endpoint.model = model;
  }
  return endpoint;
}

std::vector<ClassificationResult> classify(std::span<const ClassificationRequest> requests,
                                           const ClassifierEndpoint& endpoint) {
  std::vector<ClassificationResult> results(requests.size());
  if (requests.empty()) return results;
  for (const auto& r : requests) {
    if (r.response.empty()) throw Error(ErrorCode::EmptyResponse, "response " + std::to_string(r.response_id) + " is empty");
  }
  const SplitUrl url = split_url(endpoint.url);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, endpoint.max_in_flight), requests.size()));

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto loop = [&] {
    Worker worker(endpoint, url);
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= requests.size()) return;
      try {
        results[i] = worker.run(requests[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(loop);
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace rftkit
