#include "coachsim/plant/kinematics.hpp"

namespace coachsim::plant {

double command_to_accel(const DriverCommand& cmd) {
  switch (cmd.brake) {
    case BrakeCmd::Gentle: return -3.0;
    case BrakeCmd::Emergency: return -9.0;
    case BrakeCmd::None: break;
  }
  switch (cmd.accelerator) {
    case AcceleratorCmd::None: return 0.0;
    case AcceleratorCmd::Coasting: return -0.1;
    case AcceleratorCmd::Cruise: return 0.1;
    case AcceleratorCmd::NormalAccel: return 2.0;
    case AcceleratorCmd::StrongAccel: return 4.0;
  }
  return 0.0;
}

double actuation_accel(const ActuationCommand& act) {
  DriverCommand cmd;
  cmd.brake = act.brake;
  return command_to_accel(cmd);
}

double step_velocity(double velocity_mps, double accel_mps2, double dt_s) {
  double next = velocity_mps + accel_mps2 * dt_s;
  return next < 0.0 ? 0.0 : next;
}

double step_displacement(double displacement_m, double velocity_mps, double dt_s) {
  return displacement_m + velocity_mps * dt_s;
}

CarState plant_react(const DriverCommand& cmd, const std::optional<ActuationCommand>& act,
                     const CarState& state, double dt_s) {
  double accel = act ? actuation_accel(*act) : command_to_accel(cmd);
  CarState next;
  next.displacement_m = step_displacement(state.displacement_m, state.velocity_mps, dt_s);
  next.velocity_mps = step_velocity(state.velocity_mps, accel, dt_s);
  next.steer = cmd.steer;
  next.head = cmd.head;
  return next;
}

void VelocityIntegrator::set_accel(double accel_mps2) {
  if (accel_mps2 == accel_) return;
  base_v_ = velocity();
  steps_ = 0;
  accel_ = accel_mps2;
}

double VelocityIntegrator::velocity() const {
  double v = base_v_ + accel_ * (static_cast<double>(steps_) * dt_s_);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace coachsim::plant
