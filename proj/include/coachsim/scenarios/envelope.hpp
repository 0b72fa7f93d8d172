#pragma once

#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::scenarios {

// Velocity the scenario wants at displacement s: a constant-deceleration
// profile for the stop sign (parabolic in the (v,s) plane), a linear ramp for
// the speed change, a constant for the lane change.
double desirable_velocity(const ScenarioSpec& spec, double s_m);

struct EnvelopeBounds {
  double lower;
  double upper;
};

// desirable ± band, lower clamped at zero.
EnvelopeBounds envelope_bounds(const ScenarioSpec& spec, double s_m);

enum class Severity { None, Warning, Actuate };

std::string_view to_string(Severity s);

// Everything the intervention rule looks at. head_right_recent means a
// head=Right pose was observed within the preceding second (inclusive).
struct Observation {
  double velocity_mps = 0.0;
  double displacement_m = 0.0;
  plant::Lane lane = plant::Lane::Right;
  plant::SteerPos steer = plant::SteerPos::Center;
  bool head_right_recent = false;
};

// Velocity deviation grades None within the band, Warning within twice the
// band, Actuate beyond. The lane-change scenario adds: steering right without
// a recent head check is at least Warning, and still being in the left lane
// past the course end is Actuate. Severity is the maximum over rules.
Severity classify(const ScenarioSpec& spec, const Observation& obs);

}  // namespace coachsim::scenarios
