#include "coachsim/driver/reactors.hpp"

#include <memory>
#include <optional>

#include "coachsim/driver/behavior.hpp"
#include "coachsim/error.hpp"

namespace coachsim::driver {

using runtime::Kernel;
using runtime::PortKind;
using runtime::ReactionContext;
using runtime::Value;

namespace {

struct State {
  const scenarios::ScenarioSpec* scenario = nullptr;
  std::int64_t dt_ns = 0;
  std::optional<Directive> directive;
  std::int64_t active_from_ns = 0;
  std::int64_t active_until_ns = 0;
  std::function<void(runtime::Tag, const plant::DriverCommand&)> on_command;
};

}  // namespace

DriverPorts add_driver(Kernel& k, const DriverConfig& cfg) {
  if (cfg.scenario == nullptr) throw ConfigError("driver: scenario is required");
  if (cfg.scenario->script.empty()) throw ConfigError("driver: scenario script is empty");

  DriverPorts ports;
  ports.reactor = k.add_reactor(cfg.name);
  ports.instr_in = k.add_port<std::string>(ports.reactor, "instr_in", PortKind::Input);
  ports.cmd_out = k.add_port<plant::DriverCommand>(ports.reactor, "cmd_out", PortKind::Output);

  auto st = std::make_shared<State>();
  st->scenario = cfg.scenario;
  st->dt_ns = cfg.dt_ns;
  st->on_command = cfg.on_command;

  k.add_reaction(ports.reactor, "receive", {ports.instr_in}, {},
                 [st, instr_in = ports.instr_in](ReactionContext& ctx) {
                   const auto& text = ctx.get<std::string>(instr_in);
                   Directive d = directive_for_instruction(text);
                   if (d == Directive::NoOp) return;
                   // Takes effect at the first tick strictly after arrival:
                   // ticks fire at microstep 0, instructions arrive later in
                   // the same instant at best.
                   std::int64_t t = ctx.tag().time_ns;
                   st->directive = d;
                   st->active_from_ns = (t / st->dt_ns + 1) * st->dt_ns;
                   st->active_until_ns = st->active_from_ns + st->scenario->directive_hold_ns;
                 });

  k.add_reaction(ports.reactor, "perceive", {cfg.tick}, {ports.cmd_out},
                 [st, cmd_out = ports.cmd_out](ReactionContext& ctx) {
                   std::int64_t t = ctx.tag().time_ns;
                   plant::DriverCommand cmd = script_command(*st->scenario, t);
                   if (st->directive) {
                     if (t >= st->active_until_ns) {
                       st->directive.reset();
                     } else if (t >= st->active_from_ns) {
                       cmd = comply(*st->scenario, *st->directive);
                     }
                   }
                   ctx.set(cmd_out, Value(cmd));
                   if (st->on_command) st->on_command(ctx.tag(), cmd);
                 });

  return ports;
}

}  // namespace coachsim::driver
