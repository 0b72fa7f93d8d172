#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coachsim/backends/backend.hpp"

namespace coachsim::backends {

struct ScriptedReply {
  std::string raw;
  std::int64_t latency_ns;
  bool transport_error;
  std::string error;

  ScriptedReply(std::string raw, std::int64_t latency_ns, bool transport_error = false,
                std::string error = {})
      : raw(std::move(raw)),
        latency_ns(latency_ns),
        transport_error(transport_error),
        error(std::move(error)) {}
};

// Canned completions for closed-loop tests: consumed in order, last one
// repeats forever.
class ScriptedBackend : public AgentBackend {
 public:
  explicit ScriptedBackend(std::vector<ScriptedReply> replies);

  CompletionResult complete(const InferenceContext& ctx) override;

  std::size_t calls() const { return calls_; }

 private:
  std::vector<ScriptedReply> replies_;
  std::size_t calls_ = 0;
};

}  // namespace coachsim::backends
