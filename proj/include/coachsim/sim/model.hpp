#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "coachsim/backends/backend.hpp"
#include "coachsim/coach/prompt.hpp"
#include "coachsim/runtime/tag.hpp"
#include "coachsim/runtime/trace.hpp"
#include "coachsim/scenarios/scenario.hpp"
#include "coachsim/scenarios/success.hpp"

namespace coachsim::sim {

// Logical lags on the model's two slow paths: the human driver's
// perception-to-response lag and the coach-to-car actuation lag.
inline constexpr std::int64_t kDriverDelayNs = 500 * runtime::ns_per_ms;
inline constexpr std::int64_t kActuationDelayNs = 200 * runtime::ns_per_ms;

struct ModelConfig {
  const scenarios::ScenarioSpec* scenario = nullptr;
  const coach::PromptTemplate* prompt = nullptr;  // owned by the caller
  backends::AgentBackend* backend = nullptr;      // owned by the caller
  std::int64_t deadline_ns = 0;  // 0: the scenario's deadline
  std::int64_t horizon_ns = 0;   // 0: the scenario's horizon
  std::int64_t throttle_ns = runtime::ns_per_s;
};

struct EventCounts {
  int instructions = 0;
  int suppressed = 0;
  int deadline_misses = 0;
  int fallbacks = 0;
  int actuations = 0;  // emergency-brake overrides arriving at the car
  int skipped_triggers = 0;
  int replay_divergences = 0;
};

struct RunResult {
  std::vector<scenarios::TickSample> samples;  // one per 100 ms tick
  std::vector<runtime::TraceEvent> events;
  scenarios::SuccessReport success;
  EventCounts counts;

  std::string trace_text() const { return runtime::serialize_trace(events); }
};

// Assembles the closed loop — clock, car, environment, scripted driver,
// coach — wires the driver's 500 ms and the coach's 200 ms logical delays,
// and runs it to the horizon.
RunResult run_model(const ModelConfig& cfg);

// Plot-ready rendering of a run: one row per tick carrying the envelope
// bounds at the sampled displacement and the highest-priority event marker
// from the 100 ms interval starting at that tick.
std::string csv_text(const scenarios::ScenarioSpec& spec, const RunResult& result);

struct VerifyReport {
  bool pass = false;
  int runs = 0;
  int divergent_run = -1;  // first run whose trace differs from run 0's
  std::string divergence;  // the first differing line of each
};

// Runs the model `runs` times, each with a fresh backend from the factory,
// and compares the canonical traces byte for byte.
VerifyReport verify_determinism(
    const ModelConfig& cfg,
    const std::function<std::unique_ptr<backends::AgentBackend>()>& make_backend,
    int runs);

}  // namespace coachsim::sim
