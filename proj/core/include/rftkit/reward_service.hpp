#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rftkit/prompt_registry.hpp"

namespace rftkit {

// Wire schema identifier carried in every response body.
inline constexpr std::string_view kServiceSchemaVersion = "rftkit.reward.v1";

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds an ephemeral port
  std::size_t max_batch = 1024;
  std::size_t max_body_bytes = std::size_t{32} << 20;
  std::optional<std::string> auth_token;  // bearer token required on /v1/*
  bool request_log = true;                // JSON lines on stderr

  /// BIND_ADDR ("host:port" or "host"), MAX_BATCH, AUTH_TOKEN. Throws
  /// Error(InvalidArgument) on malformed values.
  static ServiceConfig from_env();
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

/// POST /v1/score, /v1/format, /v1/equivalence and GET /healthz. All
/// handling goes through handle(), so the routes can be exercised without a
/// socket; start()/serve() put the same handler behind httplib.
class RewardService {
 public:
  explicit RewardService(ServiceConfig config, const PromptRegistry& registry = PromptRegistry::builtin());
  ~RewardService();
  RewardService(const RewardService&) = delete;
  RewardService& operator=(const RewardService&) = delete;

  ServiceResponse handle(std::string_view method, std::string_view path, std::string_view body,
                         std::string_view authorization = {}) const;

  /// Binds and serves on a background thread; returns the bound port.
  /// Throws Error(EndpointUnreachable) when the address cannot be bound.
  int start();
  /// Binds and blocks until stop() is called from elsewhere.
  void serve();
  void stop();

  const ServiceConfig& config() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rftkit
