#pragma once

#include <cstdint>
#include <optional>

#include "coachsim/plant/types.hpp"
#include "coachsim/runtime/tag.hpp"

namespace coachsim::plant {

inline constexpr std::int64_t kTickNs = 100 * runtime::ns_per_ms;

// Longitudinal acceleration for a pedal combination, m/s^2. Braking wins
// over the accelerator.
double command_to_accel(const DriverCommand& cmd);

// Acceleration of a coach override, m/s^2.
double actuation_accel(const ActuationCommand& act);

// Forward-Euler step; velocity clamps at standstill.
double step_velocity(double velocity_mps, double accel_mps2, double dt_s);

// Displacement advances with the velocity held over the last interval.
double step_displacement(double displacement_m, double velocity_mps, double dt_s);

// One plant step: displacement uses the pre-step velocity, then velocity
// integrates the commanded (or overridden) acceleration. Steering and head
// pose pass straight through from the driver.
CarState plant_react(const DriverCommand& cmd, const std::optional<ActuationCommand>& act,
                     const CarState& state, double dt_s);

// Velocity integrator that stays exact while acceleration is constant.
// Accumulating `v += a*dt` one step at a time drifts by an ulp or two over a
// few hundred steps, enough to land a hair below zero and trip the
// standstill clamp; evaluating v = v0 + a*(k*dt) from the last rebase point
// does not. Rebasing on every acceleration change keeps the error bounded by
// the number of command changes instead of the number of ticks.
class VelocityIntegrator {
 public:
  VelocityIntegrator(double v0_mps, double dt_s) : base_v_(v0_mps), dt_s_(dt_s) {}

  // Switching acceleration freezes the current velocity as the new base.
  void set_accel(double accel_mps2);
  void step() { ++steps_; }

  double velocity() const;
  double accel() const { return accel_; }

 private:
  double base_v_;
  double dt_s_;
  double accel_ = 0.0;
  std::int64_t steps_ = 0;
};

}  // namespace coachsim::plant
