#pragma once

#include <optional>
#include <string_view>

namespace coachsim::driver {

// What the driver heard in a coach instruction. NoOp is the contract for
// anything unrecognized.
enum class Directive {
  NoOp,
  SlowDown,
  BrakeNow,
  SpeedUp,
  HoldSpeed,
  CheckRight,
  SteerRight,
  SteerLeft,
};

std::string_view to_string(Directive d);
std::optional<Directive> directive_from_string(std::string_view s);

}  // namespace coachsim::driver
