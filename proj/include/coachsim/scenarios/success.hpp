#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::scenarios {

// Plant truth collected at each 100 ms tick of a run.
struct TickSample {
  std::int64_t time_ns = 0;
  double velocity_mps = 0.0;
  double displacement_m = 0.0;
  plant::Lane lane = plant::Lane::Right;
};

struct SuccessReport {
  bool pass = false;
  std::string detail;
};

// Fixed per-scenario predicates over the tick series:
//   StopSign    — some tick has v <= 0.5 m/s with s within 5 m of the course end.
//   SpeedChange — |v - target| <= 1 at the first tick past the course end.
//   LaneChange  — right lane at the first tick past the course end, with
//                 |v - target| <= band at every tick up to and including it.
SuccessReport evaluate_success(const ScenarioSpec& spec,
                               const std::vector<TickSample>& samples);

}  // namespace coachsim::scenarios
