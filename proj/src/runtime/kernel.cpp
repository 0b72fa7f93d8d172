#include "coachsim/runtime/kernel.hpp"

#include <algorithm>
#include <set>

namespace coachsim::runtime {

namespace {

bool valid(ReactorId id, std::size_t n) {
  return id.index >= 0 && static_cast<std::size_t>(id.index) < n;
}

}  // namespace

// ---------------------------------------------------------------- context

const Tag& ReactionContext::tag() const { return kernel_.current_; }

bool ReactionContext::present(PortId port) const {
  if (port.index < 0 || static_cast<std::size_t>(port.index) >= kernel_.ports_.size()) {
    throw FatalError("present(): unknown port");
  }
  return kernel_.port_present(port.index);
}

const Value& ReactionContext::value(PortId port) const {
  if (!present(port)) {
    fault("read of absent port '" + kernel_.ports_[port.index].full_name + "'");
  }
  return kernel_.ports_[port.index].current;
}

void ReactionContext::set(PortId output, Value v) {
  Kernel& k = kernel_;
  const Kernel::Reaction& reaction = k.reactions_[reaction_];
  if (output.index < 0 || static_cast<std::size_t>(output.index) >= k.ports_.size()) {
    fault("set(): unknown port");
  }
  Kernel::Port& port = k.ports_[output.index];
  if (std::find(reaction.effects.begin(), reaction.effects.end(),
                output.index) == reaction.effects.end()) {
    fault("reaction '" + reaction.full_name + "' writes undeclared port '" +
          port.full_name + "'");
  }
  if (port.kind != PortKind::Output) {
    fault("set() on non-output port '" + port.full_name + "'");
  }
  if (port.ever_set && port.set_at == k.current_) {
    fault("two writes to port '" + port.full_name + "' at tag " +
          to_string(k.current_));
  }
  port.set_at = k.current_;
  port.ever_set = true;
  for (int conn_index : port.connections) {
    const Kernel::Connection& conn = k.connections_[conn_index];
    k.enqueue(k.current_.delayed(conn.delay_ns), false, conn.dst, v);
  }
  port.current = std::move(v);
}

void ReactionContext::schedule(PortId action, std::int64_t delay_ns, Value v) {
  Kernel& k = kernel_;
  if (action.index < 0 || static_cast<std::size_t>(action.index) >= k.ports_.size()) {
    fault("schedule(): unknown port");
  }
  const Kernel::Port& port = k.ports_[action.index];
  if (port.kind != PortKind::Action) {
    fault("schedule() on non-action port '" + port.full_name + "'");
  }
  if (port.reactor != k.reactions_[reaction_].reactor) {
    fault("schedule() on foreign action '" + port.full_name + "'");
  }
  if (delay_ns < 0) {
    fault("schedule() with negative delay on '" + port.full_name + "'");
  }
  k.enqueue(k.current_.delayed(delay_ns), false, action.index, std::move(v));
}

bool ReactionContext::check_deadline(std::int64_t elapsed_physical_ns) {
  Kernel& k = kernel_;
  Kernel::Reaction& reaction = k.reactions_[reaction_];
  if (reaction.deadline_ns < 0) {
    fault("check_deadline() in reaction '" + reaction.full_name +
          "' which has no registered deadline");
  }
  const bool violated = elapsed_physical_ns > reaction.deadline_ns;
  if (violated) {
    record(TraceKind::DeadlineMiss,
           "elapsed_ns=" + std::to_string(elapsed_physical_ns) +
               " deadline_ns=" + std::to_string(reaction.deadline_ns));
    reaction.deadline_handler(*this);
  }
  return violated;
}

void ReactionContext::record(TraceKind kind, std::string payload) {
  Kernel& k = kernel_;
  k.trace_.push_back(TraceEvent{
      k.current_, k.reactors_[k.reactions_[reaction_].reactor].name, kind,
      std::move(payload)});
}

void ReactionContext::fault(const std::string& msg) const {
  kernel_.fault_at(kernel_.current_, msg);
}

// ----------------------------------------------------------------- kernel

void Kernel::require_not_finalized(const char* what) const {
  if (finalized_) {
    throw ConfigError(std::string(what) + " after finalize()");
  }
}

ReactorId Kernel::add_reactor(std::string name) {
  require_not_finalized("add_reactor()");
  if (name.empty()) throw ConfigError("reactor name must not be empty");
  for (const Reactor& r : reactors_) {
    if (r.name == name) throw ConfigError("duplicate reactor name '" + name + "'");
  }
  reactors_.push_back(Reactor{std::move(name), {}});
  return ReactorId{static_cast<int>(reactors_.size()) - 1};
}

PortId Kernel::add_port(ReactorId reactor, std::string name, PortKind kind,
                        std::type_index type) {
  require_not_finalized("add_port()");
  if (!valid(reactor, reactors_.size())) throw ConfigError("add_port(): unknown reactor");
  Port port;
  port.reactor = reactor.index;
  port.full_name = reactors_[reactor.index].name + "." + name;
  port.kind = kind;
  port.type = type;
  for (const Port& existing : ports_) {
    if (existing.full_name == port.full_name) {
      throw ConfigError("duplicate port name '" + port.full_name + "'");
    }
  }
  ports_.push_back(std::move(port));
  return PortId{static_cast<int>(ports_.size()) - 1};
}

TimerId Kernel::add_timer(ReactorId owner, std::string name,
                          std::int64_t offset_ns, std::int64_t period_ns) {
  require_not_finalized("add_timer()");
  if (!valid(owner, reactors_.size())) throw ConfigError("add_timer(): unknown reactor");
  if (offset_ns < 0) throw ConfigError("timer offset must be >= 0");
  if (period_ns <= 0) throw ConfigError("timer period must be > 0");
  Timer timer;
  timer.owner = owner.index;
  timer.full_name = reactors_[owner.index].name + "." + name;
  timer.offset_ns = offset_ns;
  timer.period_ns = period_ns;
  timers_.push_back(std::move(timer));
  return TimerId{static_cast<int>(timers_.size()) - 1};
}

ReactionId Kernel::add_reaction(ReactorId reactor, std::string name,
                                std::vector<Trigger> triggers,
                                std::vector<PortId> effects,
                                ReactionBody body) {
  require_not_finalized("add_reaction()");
  if (!valid(reactor, reactors_.size())) throw ConfigError("add_reaction(): unknown reactor");
  if (!body) throw ConfigError("reaction body must not be empty");

  Reaction reaction;
  reaction.reactor = reactor.index;
  reaction.full_name = reactors_[reactor.index].name + "." + name;
  reaction.body = std::move(body);

  const int index = static_cast<int>(reactions_.size());
  for (const Trigger& trigger : triggers) {
    if (const PortId* port = std::get_if<PortId>(&trigger)) {
      if (port->index < 0 || static_cast<std::size_t>(port->index) >= ports_.size()) {
        throw ConfigError("reaction '" + reaction.full_name + "': unknown trigger port");
      }
      if (ports_[port->index].kind == PortKind::Output) {
        throw ConfigError("reaction '" + reaction.full_name +
                          "' triggered by output port '" +
                          ports_[port->index].full_name + "'");
      }
      ports_[port->index].triggered.push_back(index);
    } else {
      const TimerId timer = std::get<TimerId>(trigger);
      if (timer.index < 0 || static_cast<std::size_t>(timer.index) >= timers_.size()) {
        throw ConfigError("reaction '" + reaction.full_name + "': unknown trigger timer");
      }
      timers_[timer.index].triggered.push_back(index);
    }
  }
  reaction.triggers = std::move(triggers);

  for (PortId effect : effects) {
    if (effect.index < 0 || static_cast<std::size_t>(effect.index) >= ports_.size()) {
      throw ConfigError("reaction '" + reaction.full_name + "': unknown effect port");
    }
    if (ports_[effect.index].kind != PortKind::Output) {
      throw ConfigError("reaction '" + reaction.full_name +
                        "': effect port '" + ports_[effect.index].full_name +
                        "' is not an output");
    }
    reaction.effects.push_back(effect.index);
  }

  reactors_[reactor.index].reactions.push_back(index);
  reactions_.push_back(std::move(reaction));
  return ReactionId{index};
}

void Kernel::set_deadline(ReactionId reaction, std::int64_t deadline_ns,
                          ReactionBody handler) {
  require_not_finalized("set_deadline()");
  if (reaction.index < 0 || static_cast<std::size_t>(reaction.index) >= reactions_.size()) {
    throw ConfigError("set_deadline(): unknown reaction");
  }
  if (deadline_ns < 0) throw ConfigError("deadline must be >= 0");
  reactions_[reaction.index].deadline_ns = deadline_ns;
  reactions_[reaction.index].deadline_handler = std::move(handler);
}

void Kernel::connect(PortId src, PortId dst, std::int64_t delay_ns) {
  require_not_finalized("connect()");
  if (src.index < 0 || static_cast<std::size_t>(src.index) >= ports_.size() ||
      dst.index < 0 || static_cast<std::size_t>(dst.index) >= ports_.size()) {
    throw ConfigError("connect(): unknown port");
  }
  Port& source = ports_[src.index];
  Port& sink = ports_[dst.index];
  if (delay_ns < 0) {
    throw ConfigError("connect(): negative delay on '" + source.full_name + "'");
  }
  if (source.kind != PortKind::Output) {
    throw ConfigError("connect(): source '" + source.full_name + "' is not an output");
  }
  if (sink.kind != PortKind::Input) {
    throw ConfigError("connect(): destination '" + sink.full_name + "' is not an input");
  }
  if (source.type != sink.type) {
    throw ConfigError("connect(): type mismatch between '" + source.full_name +
                      "' and '" + sink.full_name + "'");
  }
  if (sink.has_writer) {
    throw ConfigError("connect(): duplicate writer for '" + sink.full_name + "'");
  }
  sink.has_writer = true;
  connections_.push_back(Connection{src.index, dst.index, delay_ns});
  source.connections.push_back(static_cast<int>(connections_.size()) - 1);
}

void Kernel::finalize() {
  require_not_finalized("finalize()");

  for (const Reaction& reaction : reactions_) {
    if (reaction.deadline_ns >= 0 && !reaction.deadline_handler) {
      throw ConfigError("reaction '" + reaction.full_name +
                        "' has a deadline but no handler");
    }
  }

  // Zero-delay dependency graph: reaction order within a reactor, plus
  // writer -> reader edges across zero-delay connections. Cycles would allow
  // an unbounded microstep ladder at a single time point.
  const std::size_t n = reactions_.size();
  std::vector<std::vector<int>> out_edges(n);
  std::vector<int> indegree(n, 0);
  auto add_edge = [&](int from, int to) {
    out_edges[from].push_back(to);
    ++indegree[to];
  };

  for (const Reactor& reactor : reactors_) {
    for (std::size_t i = 1; i < reactor.reactions.size(); ++i) {
      add_edge(reactor.reactions[i - 1], reactor.reactions[i]);
    }
  }
  for (const Connection& conn : connections_) {
    if (conn.delay_ns != 0) continue;
    for (std::size_t writer = 0; writer < n; ++writer) {
      const auto& effects = reactions_[writer].effects;
      if (std::find(effects.begin(), effects.end(), conn.src) == effects.end()) {
        continue;
      }
      for (int reader : ports_[conn.dst].triggered) {
        add_edge(static_cast<int>(writer), reader);
      }
    }
  }

  std::set<int> ready;  // ordered: registration index breaks ties
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.insert(static_cast<int>(i));
  }
  int next_topo = 0;
  while (!ready.empty()) {
    const int reaction = *ready.begin();
    ready.erase(ready.begin());
    reactions_[reaction].topo_index = next_topo++;
    for (int succ : out_edges[reaction]) {
      if (--indegree[succ] == 0) ready.insert(succ);
    }
  }
  if (next_topo != static_cast<int>(n)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (reactions_[i].topo_index < 0) {
        throw ConfigError("zero-delay dependency cycle involving reaction '" +
                          reactions_[i].full_name + "'");
      }
    }
  }

  for (std::size_t i = 0; i < timers_.size(); ++i) {
    enqueue(Tag{timers_[i].offset_ns, 0}, true, static_cast<int>(i), Value{});
  }
  finalized_ = true;
}

void Kernel::schedule_event(const Tag& tag, PortId target, Value v) {
  if (target.index < 0 || static_cast<std::size_t>(target.index) >= ports_.size()) {
    throw FatalError("schedule_event(): unknown port");
  }
  const Port& port = ports_[target.index];
  if (port.kind == PortKind::Output) {
    throw FatalError("schedule_event(): cannot deliver to output port '" +
                     port.full_name + "'");
  }
  enqueue(tag, false, target.index, std::move(v));
}

void Kernel::enqueue(Tag tag, bool is_timer, int target, Value v) {
  if (tag.time_ns < 0) {
    fault_at(tag, "event scheduled before time zero");
  }
  if (started_ && tag <= current_) {
    const std::string name =
        is_timer ? timers_[target].full_name : ports_[target].full_name;
    fault_at(current_, "event for '" + name + "' scheduled into the logical past (tag " +
                           to_string(tag) + ")");
  }
  queue_.push(Event{tag, next_seq_++, is_timer, target, std::move(v)});
}

bool Kernel::port_present(int port) const {
  return ports_[port].ever_set && ports_[port].set_at == current_;
}

void Kernel::run_until(std::int64_t horizon_ns) {
  if (!finalized_) finalize();
  while (!queue_.empty() && queue_.top().tag.time_ns <= horizon_ns) {
    process_round(queue_.top().tag);
  }
}

void Kernel::process_round(Tag tag) {
  current_ = tag;
  started_ = true;

  std::vector<int> fired_timers;
  std::vector<int> set_ports;
  while (!queue_.empty() && queue_.top().tag == tag) {
    Event ev = queue_.top();
    queue_.pop();
    if (ev.is_timer) {
      Timer& timer = timers_[ev.target];
      trace_.push_back(TraceEvent{tag, timer.full_name, TraceKind::TimerFire, ""});
      fired_timers.push_back(ev.target);
      enqueue(Tag{tag.time_ns + timer.period_ns, 0}, true, ev.target, Value{});
    } else {
      Port& port = ports_[ev.target];
      if (port.ever_set && port.set_at == tag) {
        fault_at(tag, "two writes to port '" + port.full_name + "' at one tag");
      }
      port.current = std::move(ev.value);
      port.set_at = tag;
      port.ever_set = true;
      trace_.push_back(TraceEvent{tag, port.full_name, TraceKind::PortWrite,
                                  port.current.text()});
      set_ports.push_back(ev.target);
    }
  }

  std::vector<int> todo;
  auto consider = [&](int reaction) {
    if (std::find(todo.begin(), todo.end(), reaction) == todo.end()) {
      todo.push_back(reaction);
    }
  };
  for (int timer : fired_timers) {
    for (int reaction : timers_[timer].triggered) consider(reaction);
  }
  for (int port : set_ports) {
    for (int reaction : ports_[port].triggered) consider(reaction);
  }
  std::sort(todo.begin(), todo.end(), [this](int a, int b) {
    return reactions_[a].topo_index < reactions_[b].topo_index;
  });

  for (int reaction : todo) {
    ReactionContext ctx(*this, reaction);
    reactions_[reaction].body(ctx);
  }
}

void Kernel::fault_at(const Tag& tag, const std::string& msg) const {
  throw FatalError("tag " + to_string(tag) + ": " + msg);
}

const std::string& Kernel::port_full_name(PortId port) const {
  if (port.index < 0 || static_cast<std::size_t>(port.index) >= ports_.size()) {
    throw FatalError("port_full_name(): unknown port");
  }
  return ports_[port.index].full_name;
}

const std::string& Kernel::reactor_name(ReactorId reactor) const {
  if (!valid(reactor, reactors_.size())) {
    throw FatalError("reactor_name(): unknown reactor");
  }
  return reactors_[reactor.index].name;
}

}  // namespace coachsim::runtime
