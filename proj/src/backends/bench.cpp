#include "coachsim/backends/bench.hpp"

#include <algorithm>
#include <cmath>

#include "coachsim/error.hpp"
#include "coachsim/scenarios/envelope.hpp"

namespace coachsim::backends {

BenchReport bench_run(AgentBackend& backend, const scenarios::ScenarioSpec& spec,
                      const coach::PromptTemplate& tpl, int runs) {
  if (runs <= 0) throw ConfigError("bench needs a positive run count");

  auto bounds = scenarios::envelope_bounds(spec, 0.0);
  coach::PromptInputs inputs;
  inputs.velocity_mps = spec.v0_mps;
  inputs.displacement_m = 0.0;
  inputs.envelope_lower = bounds.lower;
  inputs.envelope_upper = bounds.upper;

  InferenceContext ctx;
  ctx.tag = runtime::Tag{0, 0};
  ctx.prompt = tpl.build(inputs);
  ctx.state = plant::CarState{spec.v0_mps, 0.0, plant::SteerPos::Center, plant::HeadPos::Center};
  ctx.lane = spec.initial_lane;
  ctx.scenario = &spec;

  BenchReport report;
  report.latencies_ns.reserve(static_cast<std::size_t>(runs));
  for (int i = 0; i < runs; ++i) {
    CompletionResult res = backend.complete(ctx);
    if (res.status == CompletionResult::Status::TransportError) {
      ++report.failures;
      continue;
    }
    report.latencies_ns.push_back(res.latency_ns);
  }

  if (report.latencies_ns.empty()) return report;
  std::vector<std::int64_t> sorted = report.latencies_ns;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  report.min_ns = sorted.front();
  report.max_ns = sorted.back();
  report.median_ns = sorted[(n - 1) / 2];
  std::size_t p95_rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(n)));
  report.p95_ns = sorted[p95_rank - 1];
  report.suggested_deadline_ns = report.max_ns;
  return report;
}

}  // namespace coachsim::backends
