#include "coachsim/plant/types.hpp"

#include <sstream>

#include "coachsim/runtime/value.hpp"

namespace coachsim::plant {

std::string_view to_string(AcceleratorCmd v) {
  switch (v) {
    case AcceleratorCmd::None: return "None";
    case AcceleratorCmd::Coasting: return "Coasting";
    case AcceleratorCmd::Cruise: return "Cruise";
    case AcceleratorCmd::NormalAccel: return "NormalAccel";
    case AcceleratorCmd::StrongAccel: return "StrongAccel";
  }
  return "?";
}

std::string_view to_string(BrakeCmd v) {
  switch (v) {
    case BrakeCmd::None: return "None";
    case BrakeCmd::Gentle: return "Gentle";
    case BrakeCmd::Emergency: return "Emergency";
  }
  return "?";
}

std::string_view to_string(HeadPos v) {
  switch (v) {
    case HeadPos::Center: return "Center";
    case HeadPos::Left: return "Left";
    case HeadPos::Right: return "Right";
  }
  return "?";
}

std::string_view to_string(SteerPos v) {
  switch (v) {
    case SteerPos::Center: return "Center";
    case SteerPos::Left: return "Left";
    case SteerPos::Right: return "Right";
  }
  return "?";
}

std::string_view to_string(Lane v) {
  switch (v) {
    case Lane::Left: return "Left";
    case Lane::Right: return "Right";
  }
  return "?";
}

std::optional<AcceleratorCmd> accelerator_from_string(std::string_view s) {
  if (s == "None") return AcceleratorCmd::None;
  if (s == "Coasting") return AcceleratorCmd::Coasting;
  if (s == "Cruise") return AcceleratorCmd::Cruise;
  if (s == "NormalAccel") return AcceleratorCmd::NormalAccel;
  if (s == "StrongAccel") return AcceleratorCmd::StrongAccel;
  return std::nullopt;
}

std::optional<BrakeCmd> brake_from_string(std::string_view s) {
  if (s == "None") return BrakeCmd::None;
  if (s == "Gentle") return BrakeCmd::Gentle;
  if (s == "Emergency") return BrakeCmd::Emergency;
  return std::nullopt;
}

std::optional<HeadPos> head_from_string(std::string_view s) {
  if (s == "Center") return HeadPos::Center;
  if (s == "Left") return HeadPos::Left;
  if (s == "Right") return HeadPos::Right;
  return std::nullopt;
}

std::optional<SteerPos> steer_from_string(std::string_view s) {
  if (s == "Center") return SteerPos::Center;
  if (s == "Left") return SteerPos::Left;
  if (s == "Right") return SteerPos::Right;
  return std::nullopt;
}

std::optional<Lane> lane_from_string(std::string_view s) {
  if (s == "Left") return Lane::Left;
  if (s == "Right") return Lane::Right;
  return std::nullopt;
}

std::string trace_text(const DriverCommand& v) {
  std::ostringstream os;
  os << "accel=" << to_string(v.accelerator) << " brake=" << to_string(v.brake)
     << " head=" << to_string(v.head) << " steer=" << to_string(v.steer);
  return os.str();
}

std::string trace_text(const ActuationCommand& v) {
  std::ostringstream os;
  os << "brake=" << to_string(v.brake);
  return os.str();
}

std::string trace_text(const CarSignals& v) {
  std::ostringstream os;
  os << "v=" << runtime::trace_text(v.velocity_mps) << " steer=" << to_string(v.steer)
     << " head=" << to_string(v.head);
  return os.str();
}

std::string trace_text(const EnvSignals& v) {
  std::ostringstream os;
  os << "s=" << runtime::trace_text(v.displacement_m) << " lane=" << to_string(v.lane);
  return os.str();
}

}  // namespace coachsim::plant
