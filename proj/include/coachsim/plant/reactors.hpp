#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "coachsim/plant/kinematics.hpp"
#include "coachsim/plant/types.hpp"
#include "coachsim/runtime/kernel.hpp"

namespace coachsim::plant {

inline constexpr std::int64_t kLaneChangeHoldNs = 500 * runtime::ns_per_ms;

struct CarConfig {
  std::string name = "car";
  double v0_mps = 0.0;
  SteerPos steer0 = SteerPos::Center;
  HeadPos head0 = HeadPos::Center;
  runtime::TimerId tick;
  std::int64_t dt_ns = kTickNs;
  // Called after each tick's publication, before the integration step.
  std::function<void(runtime::Tag, const CarSignals&)> on_publish;
};

struct CarPorts {
  runtime::ReactorId reactor;
  runtime::PortId cmd_in;
  runtime::PortId act_in;
  runtime::PortId state_out;
};

// Car reactor. One reaction absorbs driver commands and coach overrides as
// they arrive; the tick reaction publishes the current state, then advances
// velocity by one step. An absorbed override wins over the held command for
// exactly that one step.
CarPorts add_car(runtime::Kernel& k, CarConfig cfg);

struct EnvConfig {
  std::string name = "env";
  double s0_m = 0.0;
  Lane lane0 = Lane::Right;
  runtime::TimerId tick;
  std::int64_t dt_ns = kTickNs;
  std::int64_t lane_hold_ns = kLaneChangeHoldNs;
  std::function<void(runtime::Tag, const EnvSignals&)> on_publish;
};

struct EnvPorts {
  runtime::ReactorId reactor;
  runtime::PortId car_in;
  runtime::PortId env_out;
};

// Environment reactor. Holds the last observed car velocity and integrates
// displacement with it one tick later, so displacement at tick n+1 uses the
// velocity published at tick n. The lane flips once steering has been held
// toward the other lane for a full lane_hold_ns window of consecutive
// observations.
EnvPorts add_environment(runtime::Kernel& k, EnvConfig cfg);

}  // namespace coachsim::plant
