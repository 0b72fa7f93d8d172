#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "coachsim/runtime/tag.hpp"

namespace coachsim::runtime {

enum class TraceKind {
  PortWrite,
  TimerFire,
  ModeTransition,
  DeadlineMiss,
  Fallback,
  Instruction,
  Actuation,
  Suppressed,
  SkippedTrigger,
  ReplayDivergence,
};

std::string_view to_string(TraceKind kind);

// One line of the canonical determinism trace. Two runs are equivalent iff
// their serialized traces are byte-identical.
struct TraceEvent {
  Tag tag;
  std::string source;  // reactor, port, or timer full name
  TraceKind kind = TraceKind::PortWrite;
  std::string payload;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// "<time_ns>.<microstep>\t<source>\t<kind>\t<payload>" with backslash, tab,
// newline, and carriage return escaped in the payload.
std::string to_line(const TraceEvent& ev);
std::string serialize_trace(const std::vector<TraceEvent>& trace);

std::string escape_field(std::string_view raw);
std::string unescape_field(std::string_view escaped);

}  // namespace coachsim::runtime
