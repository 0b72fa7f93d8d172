#pragma once

#include <cstdint>
#include <string>

#include "coachsim/driver/types.hpp"
#include "coachsim/plant/types.hpp"
#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::driver {

// Maps free-form coaching text onto the simulated driver's small repertoire
// by keyword. Unrecognized text is NoOp: the driver shrugs and carries on.
Directive directive_for_instruction(const std::string& text);

// Built-in compliance: the full command the driver holds while a directive
// is active. d must not be NoOp.
plant::DriverCommand default_compliance(Directive d);

// Scenario-specific compliance when the scenario defines one, built-in
// otherwise.
plant::DriverCommand comply(const scenarios::ScenarioSpec& spec, Directive d);

// The scripted command in force at time t: the latest segment whose start
// time is <= t. The script is non-empty and starts at 0.
const plant::DriverCommand& script_command(const scenarios::ScenarioSpec& spec,
                                           std::int64_t t_ns);

}  // namespace coachsim::driver
