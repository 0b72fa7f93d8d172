#include "coachsim/runtime/trace.hpp"

#include <charconv>

#include "coachsim/error.hpp"
#include "coachsim/runtime/value.hpp"

namespace coachsim::runtime {

std::string to_string(const Tag& tag) {
  return std::to_string(tag.time_ns) + "." + std::to_string(tag.microstep);
}

std::string trace_text(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string trace_text(std::int64_t v) { return std::to_string(v); }

std::string trace_text(bool v) { return v ? "true" : "false"; }

std::string trace_text(const std::string& v) { return v; }

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::PortWrite: return "port-write";
    case TraceKind::TimerFire: return "timer-fire";
    case TraceKind::ModeTransition: return "mode-transition";
    case TraceKind::DeadlineMiss: return "deadline-miss";
    case TraceKind::Fallback: return "fallback";
    case TraceKind::Instruction: return "instruction";
    case TraceKind::Actuation: return "actuation";
    case TraceKind::Suppressed: return "suppressed";
    case TraceKind::SkippedTrigger: return "skipped-trigger";
    case TraceKind::ReplayDivergence: return "replay-divergence";
  }
  return "unknown";
}

std::string escape_field(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view escaped) {
  std::string out;
  out.reserve(escaped.size());
  for (std::size_t i = 0; i < escaped.size(); ++i) {
    char c = escaped[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (i + 1 == escaped.size()) {
      throw ConfigError("dangling escape at end of field");
    }
    switch (escaped[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default:
        throw ConfigError(std::string("unknown escape '\\") + escaped[i] +
                          "' in field");
    }
  }
  return out;
}

std::string to_line(const TraceEvent& ev) {
  std::string line = to_string(ev.tag);
  line += '\t';
  line += ev.source;
  line += '\t';
  line += to_string(ev.kind);
  line += '\t';
  line += escape_field(ev.payload);
  return line;
}

std::string serialize_trace(const std::vector<TraceEvent>& trace) {
  std::string out;
  for (const TraceEvent& ev : trace) {
    out += to_line(ev);
    out += '\n';
  }
  return out;
}

}  // namespace coachsim::runtime
