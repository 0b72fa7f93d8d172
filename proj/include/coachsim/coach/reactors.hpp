#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "coachsim/backends/backend.hpp"
#include "coachsim/coach/output.hpp"
#include "coachsim/coach/prompt.hpp"
#include "coachsim/runtime/kernel.hpp"
#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::coach {

// Rounds an inference latency to whole milliseconds, half up. Event times
// quantize so that traces stay readable and replay-stable.
std::int64_t quantize_latency(std::int64_t latency_ns);

struct CoachConfig {
  std::string llm_name = "llm";
  std::string planner_name = "planner";
  const scenarios::ScenarioSpec* scenario = nullptr;  // envelope + deadline source
  const PromptTemplate* prompt = nullptr;             // owned by the caller
  backends::AgentBackend* backend = nullptr;          // owned by the caller
  std::int64_t deadline_ns = 0;      // 0: use the scenario's deadline
  std::int64_t throttle_ns = runtime::ns_per_s;
  std::function<void(runtime::Tag, const InferenceOutcome&)> on_outcome;
};

struct CoachPorts {
  runtime::ReactorId llm;
  runtime::ReactorId planner;
  runtime::PortId car_in;       // plant::CarSignals
  runtime::PortId env_in;       // plant::EnvSignals
  runtime::PortId outcome_out;  // InferenceOutcome (already wired to the planner)
  runtime::PortId instr_out;    // std::string
  runtime::PortId act_out;      // plant::ActuationCommand
};

// Builds the two coach reactors and the zero-delay link between them.
//
// The llm reactor joins car and environment signals, builds the prompt, and
// asks the backend for a completion; the answer comes back as a scheduled
// action delayed by the (quantized) inference latency, capped at the
// deadline so a late answer still surfaces exactly when the deadline
// expires. While a request is in flight new triggers are skipped. The result
// reaction carries the registered deadline: a late or failed completion
// records the miss and forwards a deadline-miss outcome instead of the
// response.
//
// The planner turns outcomes into behavior: fallback emergency braking on a
// miss or unparseable response, mode tracking, instruction emission with a
// one-per-throttle-window limit, and brake actuation whenever the coach
// escalates.
CoachPorts add_coach(runtime::Kernel& k, const CoachConfig& cfg);

}  // namespace coachsim::coach
