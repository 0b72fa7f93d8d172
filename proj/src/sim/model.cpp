#include "coachsim/sim/model.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <utility>

#include "coachsim/coach/reactors.hpp"
#include "coachsim/driver/reactors.hpp"
#include "coachsim/error.hpp"
#include "coachsim/plant/kinematics.hpp"
#include "coachsim/plant/reactors.hpp"
#include "coachsim/runtime/kernel.hpp"
#include "coachsim/scenarios/envelope.hpp"

namespace coachsim::sim {

using runtime::Tag;
using runtime::TraceKind;

namespace {

scenarios::TickSample& sample_row(std::vector<scenarios::TickSample>& samples,
                                  Tag tag) {
  std::size_t row = static_cast<std::size_t>(tag.time_ns / plant::kTickNs);
  if (samples.size() <= row) samples.resize(row + 1);
  samples[row].time_ns = tag.time_ns;
  return samples[row];
}

EventCounts count_events(const std::vector<runtime::TraceEvent>& events,
                         const std::string& car_name) {
  EventCounts counts;
  for (const auto& ev : events) {
    switch (ev.kind) {
      case TraceKind::Instruction:
        ++counts.instructions;
        break;
      case TraceKind::Suppressed:
        ++counts.suppressed;
        break;
      case TraceKind::DeadlineMiss:
        ++counts.deadline_misses;
        break;
      case TraceKind::Fallback:
        ++counts.fallbacks;
        break;
      case TraceKind::Actuation:
        // Both the planner's emission and the car's receipt are traced; the
        // count reports overrides that actually reached the plant.
        if (ev.source == car_name) ++counts.actuations;
        break;
      case TraceKind::SkippedTrigger:
        ++counts.skipped_triggers;
        break;
      case TraceKind::ReplayDivergence:
        ++counts.replay_divergences;
        break;
      default:
        break;
    }
  }
  return counts;
}

// Higher rank wins when several events land in the same tick's interval.
int marker_rank(TraceKind kind) {
  switch (kind) {
    case TraceKind::Fallback:
      return 5;
    case TraceKind::DeadlineMiss:
      return 4;
    case TraceKind::Actuation:
      return 3;
    case TraceKind::Suppressed:
      return 2;
    case TraceKind::Instruction:
      return 1;
    default:
      return 0;
  }
}

const char* marker_name(int rank) {
  switch (rank) {
    case 5:
      return "fallback";
    case 4:
      return "deadline_miss";
    case 3:
      return "actuation";
    case 2:
      return "suppressed";
    case 1:
      return "instruction";
    default:
      return "none";
  }
}

std::string first_divergence(const std::string& base, const std::string& other,
                             int run) {
  std::istringstream a(base);
  std::istringstream b(other);
  std::string line_a;
  std::string line_b;
  int lineno = 0;
  while (true) {
    bool has_a = static_cast<bool>(std::getline(a, line_a));
    bool has_b = static_cast<bool>(std::getline(b, line_b));
    ++lineno;
    if (!has_a && !has_b) return "traces are equal";
    if (line_a != line_b || has_a != has_b) {
      std::ostringstream os;
      os << "line " << lineno << ":\n  run 0: " << (has_a ? line_a : "<end of trace>")
         << "\n  run " << run << ": " << (has_b ? line_b : "<end of trace>");
      return os.str();
    }
  }
}

}  // namespace

RunResult run_model(const ModelConfig& cfg) {
  if (cfg.scenario == nullptr) throw ConfigError("run_model: scenario is required");
  if (cfg.prompt == nullptr) throw ConfigError("run_model: prompt template is required");
  if (cfg.backend == nullptr) throw ConfigError("run_model: backend is required");
  const scenarios::ScenarioSpec& spec = *cfg.scenario;
  std::int64_t horizon_ns = cfg.horizon_ns > 0 ? cfg.horizon_ns : spec.horizon_ns;
  if (horizon_ns <= 0) throw ConfigError("run_model: horizon must be positive");

  runtime::Kernel k;
  auto clock = k.add_reactor("clock");
  auto tick = k.add_timer(clock, "tick", 0, plant::kTickNs);

  RunResult result;
  auto& samples = result.samples;

  plant::CarConfig car_cfg;
  car_cfg.v0_mps = spec.v0_mps;
  car_cfg.tick = tick;
  car_cfg.on_publish = [&samples](Tag tag, const plant::CarSignals& sig) {
    sample_row(samples, tag).velocity_mps = sig.velocity_mps;
  };
  auto car = plant::add_car(k, std::move(car_cfg));

  plant::EnvConfig env_cfg;
  env_cfg.lane0 = spec.initial_lane;
  env_cfg.tick = tick;
  env_cfg.on_publish = [&samples](Tag tag, const plant::EnvSignals& sig) {
    auto& row = sample_row(samples, tag);
    row.displacement_m = sig.displacement_m;
    row.lane = sig.lane;
  };
  auto env = plant::add_environment(k, std::move(env_cfg));

  driver::DriverConfig drv_cfg;
  drv_cfg.scenario = &spec;
  drv_cfg.tick = tick;
  auto drv = driver::add_driver(k, drv_cfg);

  coach::CoachConfig coach_cfg;
  coach_cfg.scenario = &spec;
  coach_cfg.prompt = cfg.prompt;
  coach_cfg.backend = cfg.backend;
  coach_cfg.deadline_ns = cfg.deadline_ns;
  coach_cfg.throttle_ns = cfg.throttle_ns;
  auto cch = coach::add_coach(k, coach_cfg);

  k.connect(drv.cmd_out, car.cmd_in, kDriverDelayNs);
  k.connect(car.state_out, env.car_in, 0);
  k.connect(car.state_out, cch.car_in, 0);
  k.connect(env.env_out, cch.env_in, 0);
  k.connect(cch.instr_out, drv.instr_in, 0);
  k.connect(cch.act_out, car.act_in, kActuationDelayNs);

  k.finalize();
  k.run_until(horizon_ns);

  result.events = k.trace();
  result.success = scenarios::evaluate_success(spec, result.samples);
  result.counts = count_events(result.events, "car");
  return result;
}

std::string csv_text(const scenarios::ScenarioSpec& spec, const RunResult& result) {
  std::vector<int> ranks(result.samples.size(), 0);
  if (!result.samples.empty()) {
    for (const auto& ev : result.events) {
      int rank = marker_rank(ev.kind);
      if (rank == 0) continue;
      std::size_t row = std::min(static_cast<std::size_t>(ev.tag.time_ns / plant::kTickNs),
                                 result.samples.size() - 1);
      ranks[row] = std::max(ranks[row], rank);
    }
  }

  std::ostringstream os;
  os << "time_s,displacement_m,velocity_mps,lower_bound,upper_bound,event_marker\n";
  for (std::size_t i = 0; i < result.samples.size(); ++i) {
    const auto& s = result.samples[i];
    auto bounds = scenarios::envelope_bounds(spec, s.displacement_m);
    os << runtime::trace_text(static_cast<double>(s.time_ns) / 1e9) << ','
       << runtime::trace_text(s.displacement_m) << ','
       << runtime::trace_text(s.velocity_mps) << ','
       << runtime::trace_text(bounds.lower) << ','
       << runtime::trace_text(bounds.upper) << ',' << marker_name(ranks[i]) << '\n';
  }
  return os.str();
}

VerifyReport verify_determinism(
    const ModelConfig& cfg,
    const std::function<std::unique_ptr<backends::AgentBackend>()>& make_backend,
    int runs) {
  if (runs < 2) throw ConfigError("verify_determinism: need at least 2 runs");
  if (!make_backend) throw ConfigError("verify_determinism: backend factory is required");

  VerifyReport report;
  report.runs = runs;
  std::string base;
  for (int i = 0; i < runs; ++i) {
    auto backend = make_backend();
    ModelConfig run_cfg = cfg;
    run_cfg.backend = backend.get();
    std::string trace = run_model(run_cfg).trace_text();
    if (i == 0) {
      base = std::move(trace);
    } else if (trace != base) {
      report.divergent_run = i;
      report.divergence = first_divergence(base, trace, i);
      return report;
    }
  }
  report.pass = true;
  return report;
}

}  // namespace coachsim::sim
