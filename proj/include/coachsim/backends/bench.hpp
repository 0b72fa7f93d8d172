#pragma once

#include <cstdint>
#include <vector>

#include "coachsim/backends/backend.hpp"
#include "coachsim/coach/prompt.hpp"
#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::backends {

struct BenchReport {
  std::vector<std::int64_t> latencies_ns;  // successful completions, run order
  int failures = 0;
  std::int64_t min_ns = 0;
  std::int64_t median_ns = 0;  // lower middle for an even count
  std::int64_t p95_ns = 0;
  std::int64_t max_ns = 0;
  std::int64_t suggested_deadline_ns = 0;  // max observed; 0 if nothing succeeded
};

// Issues `runs` completions for the scenario's initial state and summarizes
// the observed latencies. The suggestion is the worst case seen: a deadline
// chosen there makes every benchmarked completion arrive in time.
BenchReport bench_run(AgentBackend& backend, const scenarios::ScenarioSpec& spec,
                      const coach::PromptTemplate& tpl, int runs);

}  // namespace coachsim::backends
