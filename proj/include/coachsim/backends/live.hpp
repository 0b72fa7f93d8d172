#pragma once

#include <string>

#include "coachsim/backends/backend.hpp"

namespace coachsim::backends {

struct LiveConfig {
  std::string endpoint;  // e.g. "http://127.0.0.1:11434"
  std::string model;
  int connect_timeout_ms = 2000;
  int read_timeout_ms = 60000;
};

// Talks to a local chat-completion server. The request carries the prompt's
// generation options verbatim; the reply's message content is returned raw
// and the wall-clock round trip is the latency. Anything other than a
// well-formed 200 is a transport error — the simulation downgrades it to a
// deadline miss rather than trusting a broken channel.
class LiveBackend : public AgentBackend {
 public:
  explicit LiveBackend(LiveConfig cfg);

  CompletionResult complete(const InferenceContext& ctx) override;

 private:
  LiveConfig cfg_;
};

}  // namespace coachsim::backends
