#include "coachsim/driver/behavior.hpp"

#include <cctype>

#include "coachsim/error.hpp"

namespace coachsim::driver {

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool has(const std::string& text, const char* needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

Directive directive_for_instruction(const std::string& text) {
  std::string t = lower(text);
  // Order matters: braking advice beats steering advice, and the explicit
  // mirror check beats the merge itself.
  if (has(t, "brak")) return Directive::BrakeNow;
  if (has(t, "slow")) return Directive::SlowDown;
  if (has(t, "check") && has(t, "right")) return Directive::CheckRight;
  bool lateral = has(t, "steer") || has(t, "merge") || has(t, "lane");
  if (lateral && has(t, "right")) return Directive::SteerRight;
  if (lateral && has(t, "left")) return Directive::SteerLeft;
  if (has(t, "speed up") || has(t, "faster") || has(t, "accelerat")) return Directive::SpeedUp;
  if (has(t, "maintain") || has(t, "hold")) return Directive::HoldSpeed;
  return Directive::NoOp;
}

plant::DriverCommand default_compliance(Directive d) {
  using plant::AcceleratorCmd;
  using plant::BrakeCmd;
  using plant::HeadPos;
  using plant::SteerPos;
  switch (d) {
    case Directive::SlowDown:
      return {AcceleratorCmd::Coasting, BrakeCmd::None, HeadPos::Center, SteerPos::Center};
    case Directive::BrakeNow:
      return {AcceleratorCmd::None, BrakeCmd::Gentle, HeadPos::Center, SteerPos::Center};
    case Directive::SpeedUp:
      return {AcceleratorCmd::NormalAccel, BrakeCmd::None, HeadPos::Center, SteerPos::Center};
    case Directive::HoldSpeed:
      return {AcceleratorCmd::Cruise, BrakeCmd::None, HeadPos::Center, SteerPos::Center};
    case Directive::CheckRight:
      return {AcceleratorCmd::Cruise, BrakeCmd::None, HeadPos::Right, SteerPos::Center};
    case Directive::SteerRight:
      return {AcceleratorCmd::Cruise, BrakeCmd::None, HeadPos::Right, SteerPos::Right};
    case Directive::SteerLeft:
      return {AcceleratorCmd::Cruise, BrakeCmd::None, HeadPos::Left, SteerPos::Left};
    case Directive::NoOp:
      break;
  }
  throw FatalError("default_compliance: NoOp has no command");
}

plant::DriverCommand comply(const scenarios::ScenarioSpec& spec, Directive d) {
  auto it = spec.compliance.find(d);
  if (it != spec.compliance.end()) return it->second;
  return default_compliance(d);
}

const plant::DriverCommand& script_command(const scenarios::ScenarioSpec& spec,
                                           std::int64_t t_ns) {
  const scenarios::ScriptSegment* active = &spec.script.front();
  for (const auto& seg : spec.script) {
    if (seg.from_time_ns > t_ns) break;
    active = &seg;
  }
  return active->command;
}

}  // namespace coachsim::driver
