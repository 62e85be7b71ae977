#include <benchmark/benchmark.h>

#include <httplib.h>

#include <json.hpp>

#include "rftkit/reward_service.hpp"

namespace {

std::string request(std::size_t n) {
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    items.push_back({{"response", "<code>print(" + std::to_string(i) + ")</code><answer>\\boxed{" +
                                      std::to_string(i % 9) + "}</answer>"},
                     {"ground_truth", std::to_string(i % 7)}});
  }
  return nlohmann::json{{"approach", "code"}, {"items", items}}.dump();
}

rftkit::ServiceConfig quiet() {
  rftkit::ServiceConfig c;
  c.port = 0;
  c.request_log = false;
  return c;
}

void BM_ServiceHandle(benchmark::State& state) {
  rftkit::RewardService svc(quiet());
  const auto body = request(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(svc.handle("POST", "/v1/score", body));
}
BENCHMARK(BM_ServiceHandle)->Arg(1)->Arg(256)->Arg(1024)->UseRealTime();

void BM_ServiceHttp(benchmark::State& state) {
  rftkit::RewardService svc(quiet());
  const int port = svc.start();
  httplib::Client cli("127.0.0.1", port);
  cli.set_keep_alive(true);
  cli.set_tcp_nodelay(true);
  const auto body = request(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto res = cli.Post("/v1/score", body, "application/json");
    if (!res || res->status != 200) state.SkipWithError("request failed");
  }
  svc.stop();
}
BENCHMARK(BM_ServiceHttp)->Arg(1)->Arg(256)->UseRealTime();

}  // namespace
