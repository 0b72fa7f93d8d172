#include "coachsim/backends/live.hpp"

#include <chrono>
#include <utility>

#include "coachsim/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace coachsim::backends {

LiveBackend::LiveBackend(LiveConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.endpoint.empty()) throw ConfigError("live backend needs an endpoint");
  if (cfg_.model.empty()) throw ConfigError("live backend needs a model name");
}

CompletionResult LiveBackend::complete(const InferenceContext& ctx) {
  nlohmann::json body = {
      {"model", cfg_.model},
      {"messages",
       {{{"role", "system"}, {"content", ctx.prompt.system_text}},
        {{"role", "user"}, {"content", ctx.prompt.user_text}}}},
      {"stream", false},
      {"options",
       {{"num_predict", ctx.prompt.max_tokens}, {"temperature", ctx.prompt.temperature}}},
  };

  httplib::Client client(cfg_.endpoint);
  client.set_connection_timeout(0, cfg_.connect_timeout_ms * 1000);
  client.set_read_timeout(cfg_.read_timeout_ms / 1000, cfg_.read_timeout_ms % 1000 * 1000);

  CompletionResult res;
  auto start = std::chrono::steady_clock::now();
  httplib::Result http = client.Post("/api/chat", body.dump(), "application/json");
  res.latency_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();

  if (!http) {
    res.status = CompletionResult::Status::TransportError;
    res.error = "request failed: " + httplib::to_string(http.error());
    return res;
  }
  if (http->status != 200) {
    res.status = CompletionResult::Status::TransportError;
    res.error = "HTTP " + std::to_string(http->status);
    return res;
  }
  nlohmann::json reply = nlohmann::json::parse(http->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("message") ||
      !reply["message"].contains("content") || !reply["message"]["content"].is_string()) {
    res.status = CompletionResult::Status::TransportError;
    res.error = "malformed completion response";
    return res;
  }
  res.raw = reply["message"]["content"].get<std::string>();
  return res;
}

}  // namespace coachsim::backends
