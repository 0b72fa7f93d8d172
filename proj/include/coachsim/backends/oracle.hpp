#pragma once

#include <cstdint>
#include <vector>

#include "coachsim/backends/backend.hpp"
#include "coachsim/coach/output.hpp"
#include "coachsim/scenarios/envelope.hpp"

namespace coachsim::backends {

// Scripted inference latencies: consumed in order, last one repeats. The
// default mimics a small local model answering in a constant 50 ms.
class LatencyModel {
 public:
  static LatencyModel constant(std::int64_t latency_ns);
  static LatencyModel sequence(std::vector<std::int64_t> latencies_ns);

  std::int64_t next();

 private:
  explicit LatencyModel(std::vector<std::int64_t> seq);

  std::vector<std::int64_t> seq_;
  std::size_t next_ = 0;
};

struct OracleConfig {
  LatencyModel latency = LatencyModel::constant(50 * runtime::ns_per_ms);
};

// The rule-based reference coach: applies the intervention rule directly to
// the structured signals and phrases the dominant violation as one of a
// fixed set of sentences the simulated driver understands. Deterministic by
// construction, so it anchors determinism and closed-loop tests.
class OracleBackend : public AgentBackend {
 public:
  OracleBackend() : OracleBackend(OracleConfig{}) {}
  explicit OracleBackend(OracleConfig cfg);

  CompletionResult complete(const InferenceContext& ctx) override;

  // The decision rule without the backend plumbing, reusable as a test
  // oracle.
  static coach::CoachOutput decide(const scenarios::ScenarioSpec& spec,
                                   const scenarios::Observation& obs);

 private:
  LatencyModel latency_;
  std::int64_t last_head_right_ns_ = -1;
};

}  // namespace coachsim::backends
