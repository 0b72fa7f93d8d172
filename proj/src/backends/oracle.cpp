#include "coachsim/backends/oracle.hpp"

#include <cmath>
#include <utility>

#include "coachsim/error.hpp"

namespace coachsim::backends {

using coach::CoachOutput;
using coach::ControlSignal;
using scenarios::Severity;

LatencyModel::LatencyModel(std::vector<std::int64_t> seq) : seq_(std::move(seq)) {}

LatencyModel LatencyModel::constant(std::int64_t latency_ns) {
  return LatencyModel({latency_ns});
}

LatencyModel LatencyModel::sequence(std::vector<std::int64_t> latencies_ns) {
  if (latencies_ns.empty()) throw ConfigError("latency sequence must not be empty");
  return LatencyModel(std::move(latencies_ns));
}

std::int64_t LatencyModel::next() {
  std::int64_t v = seq_[next_ < seq_.size() ? next_ : seq_.size() - 1];
  ++next_;
  return v;
}

OracleBackend::OracleBackend(OracleConfig cfg) : latency_(std::move(cfg.latency)) {}

CoachOutput OracleBackend::decide(const scenarios::ScenarioSpec& spec,
                                  const scenarios::Observation& obs) {
  Severity severity = scenarios::classify(spec, obs);
  if (severity == Severity::None) return {ControlSignal::NONE, ""};

  double v_d = scenarios::desirable_velocity(spec, obs.displacement_m);
  double deviation = std::abs(obs.velocity_mps - v_d);
  double band = spec.band_halfwidth_mps;
  Severity speed_sev = deviation > 2 * band   ? Severity::Actuate
                       : deviation > band     ? Severity::Warning
                                              : Severity::None;
  Severity lane_sev = Severity::None;
  if (spec.kind == scenarios::ScenarioKind::LaneChange) {
    if (obs.lane == plant::Lane::Left && obs.displacement_m >= spec.course_length_m) {
      lane_sev = Severity::Actuate;
    } else if (obs.steer == plant::SteerPos::Right && !obs.head_right_recent) {
      lane_sev = Severity::Warning;
    }
  }

  // The lateral rule wins ties: it is the lane-change scenario's whole point.
  std::string text;
  if (lane_sev != Severity::None && lane_sev >= speed_sev) {
    text = lane_sev == Severity::Actuate ? "Steer gently into the right lane."
                                         : "Check your right mirror before merging.";
  } else if (obs.velocity_mps > v_d) {
    if (speed_sev == Severity::Actuate) {
      text = "Emergency braking now.";
    } else {
      text = deviation <= 1.5 * band ? "Ease off and slow down."
                                     : "Apply gentle braking now.";
    }
  } else {
    text = speed_sev == Severity::Actuate ? "Speed up now." : "Speed up a little.";
  }
  ControlSignal signal = severity == Severity::Actuate ? ControlSignal::ACTUATE
                                                       : ControlSignal::WARNING;
  return {signal, std::move(text)};
}

CompletionResult OracleBackend::complete(const InferenceContext& ctx) {
  if (ctx.scenario == nullptr) throw ConfigError("oracle backend needs a scenario");
  if (ctx.state.head == plant::HeadPos::Right) {
    last_head_right_ns_ = ctx.tag.time_ns;
  }
  scenarios::Observation obs;
  obs.velocity_mps = ctx.state.velocity_mps;
  obs.displacement_m = ctx.state.displacement_m;
  obs.lane = ctx.lane;
  obs.steer = ctx.state.steer;
  obs.head_right_recent = last_head_right_ns_ >= 0 &&
                          ctx.tag.time_ns - last_head_right_ns_ <= runtime::ns_per_s;

  CompletionResult res;
  res.raw = coach::serialize_output(decide(*ctx.scenario, obs));
  res.latency_ns = latency_.next();
  return res;
}

}  // namespace coachsim::backends
