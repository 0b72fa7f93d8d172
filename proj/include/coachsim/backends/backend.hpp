#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "coachsim/coach/prompt.hpp"
#include "coachsim/plant/types.hpp"
#include "coachsim/runtime/tag.hpp"
#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::backends {

// Everything a provider may look at for one completion. The oracle uses the
// structured fields; the live backend uses only the prompt.
struct InferenceContext {
  runtime::Tag tag;
  coach::PromptDoc prompt;
  plant::CarState state;
  plant::Lane lane = plant::Lane::Right;
  const scenarios::ScenarioSpec* scenario = nullptr;
};

struct CompletionResult {
  enum class Status { Ok, TransportError };
  Status status = Status::Ok;
  std::string raw;
  std::int64_t latency_ns = 0;
  std::string error;       // transport failure detail
  std::string divergence;  // replay digest mismatch note, empty otherwise
};

class AgentBackend {
 public:
  virtual ~AgentBackend() = default;
  virtual CompletionResult complete(const InferenceContext& ctx) = 0;
};

// A transport failure has no usable latency, but replay must reproduce the
// exact deadline-miss the live run saw; pinning the recorded latency just
// past the deadline makes the miss a property of the file, not the wall
// clock.
inline std::int64_t normalize_transport_latency(std::int64_t measured_ns,
                                                std::int64_t deadline_ns) {
  return std::max(measured_ns, deadline_ns + runtime::ns_per_ms);
}

}  // namespace coachsim::backends
