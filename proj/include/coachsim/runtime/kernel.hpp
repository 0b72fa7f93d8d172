#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <typeindex>
#include <variant>
#include <vector>

#include "coachsim/error.hpp"
#include "coachsim/runtime/tag.hpp"
#include "coachsim/runtime/trace.hpp"
#include "coachsim/runtime/value.hpp"

namespace coachsim::runtime {

struct ReactorId {
  int index = -1;
  friend bool operator==(ReactorId, ReactorId) = default;
};
struct PortId {
  int index = -1;
  friend bool operator==(PortId, PortId) = default;
};
struct TimerId {
  int index = -1;
  friend bool operator==(TimerId, TimerId) = default;
};
struct ReactionId {
  int index = -1;
  friend bool operator==(ReactionId, ReactionId) = default;
};

// Inputs and actions receive events from the queue; outputs fan out through
// connections. Actions are scheduled directly by reactions of the owning
// reactor and never connected.
enum class PortKind { Input, Output, Action };

using Trigger = std::variant<PortId, TimerId>;

class Kernel;

// Handed to a reaction body while it runs at the current tag.
class ReactionContext {
 public:
  const Tag& tag() const;
  bool present(PortId port) const;
  const Value& value(PortId port) const;

  template <class T>
  const T& get(PortId port) const {
    return value(port).as<T>();
  }

  // Writes a declared output port at the current tag and fans the value out
  // through every connection. At most one write per port per tag.
  void set(PortId output, Value v);

  // Schedules an event onto an action port of the owning reactor.
  void schedule(PortId action, std::int64_t delay_ns, Value v);

  // Compares injected physical latency against the reaction's registered
  // deadline (violated iff elapsed > deadline). On violation a deadline-miss
  // trace event is recorded and the deadline handler runs before returning.
  bool check_deadline(std::int64_t elapsed_physical_ns);

  // Records a domain trace event attributed to the owning reactor.
  void record(TraceKind kind, std::string payload);

  [[noreturn]] void fault(const std::string& msg) const;

 private:
  friend class Kernel;
  ReactionContext(Kernel& kernel, int reaction)
      : kernel_(kernel), reaction_(reaction) {}

  Kernel& kernel_;
  int reaction_;
};

using ReactionBody = std::function<void(ReactionContext&)>;

// Single-threaded discrete-event kernel. Reactors, ports, timers, reactions,
// and connections are registered up front; finalize() freezes the topology,
// orders reactions topologically, and rejects zero-delay cycles. run_until()
// then processes events in tag order. Identical topology plus identical
// injected inputs yields a byte-identical trace.
class Kernel {
 public:
  Kernel() = default;
  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  ReactorId add_reactor(std::string name);

  PortId add_port(ReactorId reactor, std::string name, PortKind kind,
                  std::type_index type);
  template <class T>
  PortId add_port(ReactorId reactor, std::string name, PortKind kind) {
    return add_port(reactor, std::move(name), kind, typeid(T));
  }

  // Fires at offset_ns and every period_ns after, always at microstep 0.
  TimerId add_timer(ReactorId owner, std::string name, std::int64_t offset_ns,
                    std::int64_t period_ns);

  // Reactions run in registration order within a reactor; effects must list
  // every output port the body may write.
  ReactionId add_reaction(ReactorId reactor, std::string name,
                          std::vector<Trigger> triggers,
                          std::vector<PortId> effects, ReactionBody body);

  void set_deadline(ReactionId reaction, std::int64_t deadline_ns,
                    ReactionBody handler);

  // Events written to src are delivered to dst at the write tag delayed by
  // delay_ns. A destination accepts exactly one incoming connection.
  void connect(PortId src, PortId dst, std::int64_t delay_ns);

  // Freezes the topology: validates deadlines, builds the zero-delay
  // dependency graph, assigns topological reaction indices, seeds timers.
  void finalize();
  bool finalized() const { return finalized_; }

  // Processes every event with tag.time_ns <= horizon_ns in tag order.
  void run_until(std::int64_t horizon_ns);

  // Direct event injection (also the internal path used by connections and
  // timers). Scheduling at or before the current tag is a hard fault.
  void schedule_event(const Tag& tag, PortId target, Value v);

  const Tag& now() const { return current_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  std::string trace_text() const { return serialize_trace(trace_); }

  const std::string& port_full_name(PortId port) const;
  const std::string& reactor_name(ReactorId reactor) const;

 private:
  friend class ReactionContext;

  struct Reactor {
    std::string name;
    std::vector<int> reactions;
  };
  struct Port {
    int reactor = -1;
    std::string full_name;
    PortKind kind = PortKind::Input;
    std::type_index type = std::type_index(typeid(void));
    bool has_writer = false;        // incoming connection present
    std::vector<int> connections;   // outgoing, indices into connections_
    std::vector<int> triggered;     // reactions triggered by this port
    Value current;
    Tag set_at{-1, 0};
    bool ever_set = false;
  };
  struct Timer {
    int owner = -1;
    std::string full_name;
    std::int64_t offset_ns = 0;
    std::int64_t period_ns = 0;
    std::vector<int> triggered;
  };
  struct Connection {
    int src = -1;
    int dst = -1;
    std::int64_t delay_ns = 0;
  };
  struct Reaction {
    int reactor = -1;
    std::string full_name;
    std::vector<Trigger> triggers;
    std::vector<int> effects;
    ReactionBody body;
    std::int64_t deadline_ns = -1;
    ReactionBody deadline_handler;
    int topo_index = -1;
  };
  struct Event {
    Tag tag;
    std::uint64_t seq = 0;  // schedule order; makes queue order total
    bool is_timer = false;
    int target = -1;
    Value value;
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.tag != b.tag) return b.tag < a.tag;
      return b.seq < a.seq;
    }
  };

  void require_not_finalized(const char* what) const;
  void enqueue(Tag tag, bool is_timer, int target, Value v);
  void process_round(Tag tag);  // by value: popping invalidates queue refs
  bool port_present(int port) const;
  [[noreturn]] void fault_at(const Tag& tag, const std::string& msg) const;

  std::vector<Reactor> reactors_;
  std::vector<Port> ports_;
  std::vector<Timer> timers_;
  std::vector<Connection> connections_;
  std::vector<Reaction> reactions_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::vector<TraceEvent> trace_;
  Tag current_{-1, 0};
  std::uint64_t next_seq_ = 0;
  bool finalized_ = false;
  bool started_ = false;
};

}  // namespace coachsim::runtime
