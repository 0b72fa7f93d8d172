#include "coachsim/scenarios/envelope.hpp"

#include <algorithm>
#include <cmath>

namespace coachsim::scenarios {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::None: return "None";
    case Severity::Warning: return "Warning";
    case Severity::Actuate: return "Actuate";
  }
  return "?";
}

double desirable_velocity(const ScenarioSpec& spec, double s_m) {
  switch (spec.kind) {
    case ScenarioKind::StopSign: {
      double remaining = 1.0 - s_m / spec.course_length_m;
      return remaining <= 0.0 ? 0.0 : spec.v0_mps * std::sqrt(remaining);
    }
    case ScenarioKind::SpeedChange: {
      double progress = std::min(s_m, spec.course_length_m) / spec.course_length_m;
      return spec.v0_mps + (spec.target_v_mps - spec.v0_mps) * progress;
    }
    case ScenarioKind::LaneChange:
      return spec.target_v_mps;
  }
  return 0.0;
}

EnvelopeBounds envelope_bounds(const ScenarioSpec& spec, double s_m) {
  double desirable = desirable_velocity(spec, s_m);
  return {std::max(0.0, desirable - spec.band_halfwidth_mps),
          desirable + spec.band_halfwidth_mps};
}

Severity classify(const ScenarioSpec& spec, const Observation& obs) {
  double deviation = std::abs(obs.velocity_mps - desirable_velocity(spec, obs.displacement_m));
  Severity severity = Severity::None;
  if (deviation > 2.0 * spec.band_halfwidth_mps) {
    severity = Severity::Actuate;
  } else if (deviation > spec.band_halfwidth_mps) {
    severity = Severity::Warning;
  }
  if (spec.kind == ScenarioKind::LaneChange) {
    if (obs.steer == plant::SteerPos::Right && !obs.head_right_recent) {
      severity = std::max(severity, Severity::Warning);
    }
    if (obs.lane == plant::Lane::Left && obs.displacement_m >= spec.course_length_m) {
      severity = std::max(severity, Severity::Actuate);
    }
  }
  return severity;
}

}  // namespace coachsim::scenarios
