#include "coachsim/coach/reactors.hpp"

#include <algorithm>
#include <memory>
#include <utility>

#include "coachsim/error.hpp"
#include "coachsim/plant/types.hpp"
#include "coachsim/scenarios/envelope.hpp"

namespace coachsim::coach {

using runtime::Kernel;
using runtime::PortKind;
using runtime::ReactionContext;
using runtime::Tag;
using runtime::TraceKind;
using runtime::Value;

std::int64_t quantize_latency(std::int64_t latency_ns) {
  return (latency_ns + runtime::ns_per_ms / 2) / runtime::ns_per_ms * runtime::ns_per_ms;
}

namespace {

struct LlmState {
  const scenarios::ScenarioSpec* scenario = nullptr;
  PromptTemplate prompt;
  backends::AgentBackend* backend = nullptr;
  std::int64_t deadline_ns = 0;
  bool in_flight = false;
  std::function<void(Tag, const InferenceOutcome&)> on_outcome;

  LlmState(const PromptTemplate& tpl) : prompt(tpl) {}
};

struct PlannerState {
  ControlSignal mode = ControlSignal::NONE;
  std::int64_t throttle_ns = 0;
  std::int64_t last_emit_ns = 0;
  bool has_emitted = false;
};

// Decides what the planner will eventually see, based on transport status,
// latency, and response text. A late response is discarded unparsed: the
// planner must act on the miss, not on stale advice.
InferenceOutcome outcome_for(const backends::CompletionResult& res,
                             std::int64_t deadline_ns) {
  InferenceOutcome out;
  if (res.status == backends::CompletionResult::Status::TransportError) {
    out.kind = InferenceOutcome::Kind::DeadlineMiss;
    out.latency_ns = backends::normalize_transport_latency(res.latency_ns, deadline_ns);
    out.detail = res.error;
    return out;
  }
  out.latency_ns = res.latency_ns;
  if (res.latency_ns > deadline_ns) {
    out.kind = InferenceOutcome::Kind::DeadlineMiss;
    return out;
  }
  ParseResult parsed = parse_response(res.raw);
  if (const auto* err = std::get_if<ParseError>(&parsed)) {
    out.kind = InferenceOutcome::Kind::ParseFailure;
    out.detail = err->reason;
    return out;
  }
  out.kind = InferenceOutcome::Kind::Ok;
  out.output = std::get<CoachOutput>(parsed);
  return out;
}

}  // namespace

CoachPorts add_coach(Kernel& k, const CoachConfig& cfg) {
  if (cfg.scenario == nullptr) throw ConfigError("coach: scenario is required");
  if (cfg.prompt == nullptr) throw ConfigError("coach: prompt template is required");
  if (cfg.backend == nullptr) throw ConfigError("coach: backend is required");

  CoachPorts ports;
  ports.llm = k.add_reactor(cfg.llm_name);
  ports.car_in = k.add_port<plant::CarSignals>(ports.llm, "car_in", PortKind::Input);
  ports.env_in = k.add_port<plant::EnvSignals>(ports.llm, "env_in", PortKind::Input);
  ports.outcome_out = k.add_port<InferenceOutcome>(ports.llm, "outcome_out", PortKind::Output);
  auto result = k.add_port<InferenceOutcome>(ports.llm, "result", PortKind::Action);

  auto st = std::make_shared<LlmState>(*cfg.prompt);
  st->scenario = cfg.scenario;
  st->backend = cfg.backend;
  st->deadline_ns = cfg.deadline_ns > 0 ? cfg.deadline_ns : cfg.scenario->deadline_ns;
  st->on_outcome = cfg.on_outcome;

  k.add_reaction(
      ports.llm, "request", {ports.car_in, ports.env_in}, {},
      [st, car_in = ports.car_in, env_in = ports.env_in, result](ReactionContext& ctx) {
        if (!ctx.present(car_in) || !ctx.present(env_in)) return;
        if (st->in_flight) {
          ctx.record(TraceKind::SkippedTrigger, "request in flight");
          return;
        }
        const auto& car = ctx.get<plant::CarSignals>(car_in);
        const auto& env = ctx.get<plant::EnvSignals>(env_in);
        auto bounds = scenarios::envelope_bounds(*st->scenario, env.displacement_m);
        PromptInputs inputs;
        inputs.velocity_mps = car.velocity_mps;
        inputs.displacement_m = env.displacement_m;
        inputs.steer = car.steer;
        inputs.head = car.head;
        inputs.envelope_lower = bounds.lower;
        inputs.envelope_upper = bounds.upper;

        backends::InferenceContext req;
        req.tag = ctx.tag();
        req.prompt = st->prompt.build(inputs);
        req.state = plant::CarState{car.velocity_mps, env.displacement_m, car.steer, car.head};
        req.lane = env.lane;
        req.scenario = st->scenario;

        backends::CompletionResult res = st->backend->complete(req);
        if (!res.divergence.empty()) {
          ctx.record(TraceKind::ReplayDivergence, res.divergence);
        }
        InferenceOutcome outcome = outcome_for(res, st->deadline_ns);
        std::int64_t delay =
            std::min(quantize_latency(outcome.latency_ns), st->deadline_ns);
        st->in_flight = true;
        ctx.schedule(result, delay, Value(outcome));
      });

  auto on_result = k.add_reaction(
      ports.llm, "result", {result}, {ports.outcome_out},
      [st, result, outcome_out = ports.outcome_out](ReactionContext& ctx) {
        st->in_flight = false;
        const auto& outcome = ctx.get<InferenceOutcome>(result);
        if (ctx.check_deadline(outcome.latency_ns)) return;  // handler took over
        if (st->on_outcome) st->on_outcome(ctx.tag(), outcome);
        ctx.set(outcome_out, Value(outcome));
      });
  k.set_deadline(on_result, st->deadline_ns,
                 [st, result, outcome_out = ports.outcome_out](ReactionContext& ctx) {
                   InferenceOutcome miss = ctx.get<InferenceOutcome>(result);
                   miss.kind = InferenceOutcome::Kind::DeadlineMiss;
                   miss.output = CoachOutput{};
                   if (st->on_outcome) st->on_outcome(ctx.tag(), miss);
                   ctx.set(outcome_out, Value(miss));
                 });

  ports.planner = k.add_reactor(cfg.planner_name);
  auto outcome_in = k.add_port<InferenceOutcome>(ports.planner, "outcome_in", PortKind::Input);
  ports.instr_out = k.add_port<std::string>(ports.planner, "instr_out", PortKind::Output);
  ports.act_out = k.add_port<plant::ActuationCommand>(ports.planner, "act_out", PortKind::Output);

  auto ps = std::make_shared<PlannerState>();
  ps->throttle_ns = cfg.throttle_ns;

  k.add_reaction(
      ports.planner, "decide", {outcome_in},
      {ports.instr_out, ports.act_out},
      [ps, outcome_in, instr_out = ports.instr_out, act_out = ports.act_out](ReactionContext& ctx) {
        const auto& outcome = ctx.get<InferenceOutcome>(outcome_in);
        if (outcome.kind != InferenceOutcome::Kind::Ok) {
          std::string reason = outcome.kind == InferenceOutcome::Kind::DeadlineMiss
                                   ? "deadline-miss"
                                   : "parse-failure: " + outcome.detail;
          ctx.record(TraceKind::Fallback, "reason=" + reason);
          ctx.set(act_out, Value(plant::ActuationCommand{}));
          ctx.record(TraceKind::Actuation, "brake=Emergency");
          return;
        }
        const CoachOutput& out = outcome.output;
        if (out.signal != ps->mode) {
          ctx.record(TraceKind::ModeTransition, std::string(to_string(ps->mode)) +
                                                    " -> " + std::string(to_string(out.signal)));
          ps->mode = out.signal;
        }
        if (out.signal == ControlSignal::NONE) return;
        std::int64_t now = ctx.tag().time_ns;
        if (!ps->has_emitted || now - ps->last_emit_ns >= ps->throttle_ns) {
          ctx.set(instr_out, Value(out.instruction));
          ctx.record(TraceKind::Instruction, out.instruction);
          ps->last_emit_ns = now;
          ps->has_emitted = true;
        } else {
          ctx.record(TraceKind::Suppressed, out.instruction);
        }
        if (out.signal == ControlSignal::ACTUATE) {
          ctx.set(act_out, Value(plant::ActuationCommand{}));
          ctx.record(TraceKind::Actuation, "brake=Emergency");
        }
      });

  k.connect(ports.outcome_out, outcome_in, 0);
  return ports;
}

}  // namespace coachsim::coach
