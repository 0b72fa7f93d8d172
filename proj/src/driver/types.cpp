#include "coachsim/driver/types.hpp"

namespace coachsim::driver {

std::string_view to_string(Directive d) {
  switch (d) {
    case Directive::NoOp: return "NoOp";
    case Directive::SlowDown: return "SlowDown";
    case Directive::BrakeNow: return "BrakeNow";
    case Directive::SpeedUp: return "SpeedUp";
    case Directive::HoldSpeed: return "HoldSpeed";
    case Directive::CheckRight: return "CheckRight";
    case Directive::SteerRight: return "SteerRight";
    case Directive::SteerLeft: return "SteerLeft";
  }
  return "?";
}

std::optional<Directive> directive_from_string(std::string_view s) {
  if (s == "NoOp") return Directive::NoOp;
  if (s == "SlowDown") return Directive::SlowDown;
  if (s == "BrakeNow") return Directive::BrakeNow;
  if (s == "SpeedUp") return Directive::SpeedUp;
  if (s == "HoldSpeed") return Directive::HoldSpeed;
  if (s == "CheckRight") return Directive::CheckRight;
  if (s == "SteerRight") return Directive::SteerRight;
  if (s == "SteerLeft") return Directive::SteerLeft;
  return std::nullopt;
}

}  // namespace coachsim::driver
