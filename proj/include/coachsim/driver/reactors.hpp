#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "coachsim/plant/kinematics.hpp"
#include "coachsim/plant/types.hpp"
#include "coachsim/runtime/kernel.hpp"
#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::driver {

struct DriverConfig {
  std::string name = "driver";
  const scenarios::ScenarioSpec* scenario = nullptr;  // script + compliance + hold
  runtime::TimerId tick;
  std::int64_t dt_ns = plant::kTickNs;
  std::function<void(runtime::Tag, const plant::DriverCommand&)> on_command;
};

struct DriverPorts {
  runtime::ReactorId reactor;
  runtime::PortId instr_in;  // std::string
  runtime::PortId cmd_out;   // plant::DriverCommand
};

// The scripted driver. Every tick it publishes the command its script calls
// for — unless a coach directive is active, in which case the compliance
// command replaces it wholesale. A recognized instruction takes effect at
// the first tick after it arrives and holds for the scenario's hold window;
// a newer directive displaces an older one, and unrecognized text changes
// nothing.
DriverPorts add_driver(runtime::Kernel& k, const DriverConfig& cfg);

}  // namespace coachsim::driver
