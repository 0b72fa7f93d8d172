#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace coachsim::plant {

enum class AcceleratorCmd { None, Coasting, Cruise, NormalAccel, StrongAccel };
enum class BrakeCmd { None, Gentle, Emergency };
enum class HeadPos { Center, Left, Right };
enum class SteerPos { Center, Left, Right };
enum class Lane { Left, Right };

std::string_view to_string(AcceleratorCmd v);
std::string_view to_string(BrakeCmd v);
std::string_view to_string(HeadPos v);
std::string_view to_string(SteerPos v);
std::string_view to_string(Lane v);

std::optional<AcceleratorCmd> accelerator_from_string(std::string_view s);
std::optional<BrakeCmd> brake_from_string(std::string_view s);
std::optional<HeadPos> head_from_string(std::string_view s);
std::optional<SteerPos> steer_from_string(std::string_view s);
std::optional<Lane> lane_from_string(std::string_view s);

// Pedal and body positions the driver holds at a perception tick. A brake
// command overrides the accelerator.
struct DriverCommand {
  AcceleratorCmd accelerator = AcceleratorCmd::None;
  BrakeCmd brake = BrakeCmd::None;
  HeadPos head = HeadPos::Center;
  SteerPos steer = SteerPos::Center;

  friend bool operator==(const DriverCommand&, const DriverCommand&) = default;
};

// Plant truth at one tick: what the coach and the success evaluation see.
struct CarState {
  double velocity_mps = 0.0;
  double displacement_m = 0.0;
  SteerPos steer = SteerPos::Center;
  HeadPos head = HeadPos::Center;

  friend bool operator==(const CarState&, const CarState&) = default;
};

// Safety override from the coach; always maximal braking.
struct ActuationCommand {
  BrakeCmd brake = BrakeCmd::Emergency;

  friend bool operator==(const ActuationCommand&, const ActuationCommand&) = default;
};

// Port payload published by the car reactor each tick.
struct CarSignals {
  double velocity_mps = 0.0;
  SteerPos steer = SteerPos::Center;
  HeadPos head = HeadPos::Center;

  friend bool operator==(const CarSignals&, const CarSignals&) = default;
};

// Port payload published by the environment reactor each tick.
struct EnvSignals {
  double displacement_m = 0.0;
  Lane lane = Lane::Right;

  friend bool operator==(const EnvSignals&, const EnvSignals&) = default;
};

std::string trace_text(const DriverCommand& v);
std::string trace_text(const ActuationCommand& v);
std::string trace_text(const CarSignals& v);
std::string trace_text(const EnvSignals& v);

}  // namespace coachsim::plant
