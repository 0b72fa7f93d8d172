#include "coachsim/plant/reactors.hpp"

#include <memory>
#include <optional>
#include <utility>

namespace coachsim::plant {

using runtime::Kernel;
using runtime::PortKind;
using runtime::ReactionContext;
using runtime::TraceKind;
using runtime::Value;

CarPorts add_car(Kernel& k, CarConfig cfg) {
  CarPorts ports;
  ports.reactor = k.add_reactor(cfg.name);
  ports.cmd_in = k.add_port<DriverCommand>(ports.reactor, "cmd_in", PortKind::Input);
  ports.act_in = k.add_port<ActuationCommand>(ports.reactor, "act_in", PortKind::Input);
  ports.state_out = k.add_port<CarSignals>(ports.reactor, "state_out", PortKind::Output);

  struct State {
    VelocityIntegrator integ;
    DriverCommand held;
    std::optional<ActuationCommand> pending_act;
    std::function<void(runtime::Tag, const CarSignals&)> on_publish;
  };
  auto st = std::make_shared<State>(State{
      VelocityIntegrator(cfg.v0_mps, static_cast<double>(cfg.dt_ns) / runtime::ns_per_s),
      DriverCommand{AcceleratorCmd::None, BrakeCmd::None, cfg.head0, cfg.steer0},
      std::nullopt,
      std::move(cfg.on_publish)});

  k.add_reaction(ports.reactor, "absorb",
                 {ports.cmd_in, ports.act_in}, {},
                 [st, cmd_in = ports.cmd_in, act_in = ports.act_in](ReactionContext& ctx) {
                   if (ctx.present(cmd_in)) st->held = ctx.get<DriverCommand>(cmd_in);
                   if (ctx.present(act_in)) {
                     st->pending_act = ctx.get<ActuationCommand>(act_in);
                     // Arrival is traced here so the actuation path latency is
                     // visible end to end; the override applies at the next tick.
                     ctx.record(TraceKind::Actuation, trace_text(*st->pending_act));
                   }
                 });

  k.add_reaction(ports.reactor, "step", {cfg.tick}, {ports.state_out},
                 [st, state_out = ports.state_out](ReactionContext& ctx) {
                   CarSignals out{st->integ.velocity(), st->held.steer, st->held.head};
                   ctx.set(state_out, Value(out));
                   if (st->on_publish) st->on_publish(ctx.tag(), out);
                   double accel = st->pending_act ? actuation_accel(*st->pending_act)
                                                  : command_to_accel(st->held);
                   st->integ.set_accel(accel);
                   st->integ.step();
                   st->pending_act.reset();
                 });
  return ports;
}

EnvPorts add_environment(Kernel& k, EnvConfig cfg) {
  EnvPorts ports;
  ports.reactor = k.add_reactor(cfg.name);
  ports.car_in = k.add_port<CarSignals>(ports.reactor, "car_in", PortKind::Input);
  ports.env_out = k.add_port<EnvSignals>(ports.reactor, "env_out", PortKind::Output);

  struct State {
    double s;
    Lane lane;
    bool have_velocity = false;
    double held_velocity = 0.0;
    int right_run = 0;
    int left_run = 0;
    int runs_needed;
    double dt_s;
    std::function<void(runtime::Tag, const EnvSignals&)> on_publish;
  };
  auto st = std::make_shared<State>();
  st->s = cfg.s0_m;
  st->lane = cfg.lane0;
  st->runs_needed = static_cast<int>(cfg.lane_hold_ns / cfg.dt_ns) + 1;
  st->dt_s = static_cast<double>(cfg.dt_ns) / runtime::ns_per_s;
  st->on_publish = std::move(cfg.on_publish);

  k.add_reaction(ports.reactor, "advance", {cfg.tick}, {ports.env_out},
                 [st, env_out = ports.env_out](ReactionContext& ctx) {
                   if (st->have_velocity) st->s += st->held_velocity * st->dt_s;
                   EnvSignals out{st->s, st->lane};
                   ctx.set(env_out, Value(out));
                   if (st->on_publish) st->on_publish(ctx.tag(), out);
                 });

  k.add_reaction(ports.reactor, "observe", {ports.car_in}, {},
                 [st, car_in = ports.car_in](ReactionContext& ctx) {
                   const auto& in = ctx.get<CarSignals>(car_in);
                   st->have_velocity = true;
                   st->held_velocity = in.velocity_mps;
                   st->right_run = in.steer == SteerPos::Right ? st->right_run + 1 : 0;
                   st->left_run = in.steer == SteerPos::Left ? st->left_run + 1 : 0;
                   if (st->lane == Lane::Left && st->right_run >= st->runs_needed) {
                     st->lane = Lane::Right;
                     st->right_run = 0;
                   } else if (st->lane == Lane::Right && st->left_run >= st->runs_needed) {
                     st->lane = Lane::Left;
                     st->left_run = 0;
                   }
                 });
  return ports;
}

}  // namespace coachsim::plant
