#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace coachsim::coach {

enum class ControlSignal { NONE, WARNING, ACTUATE };

std::string_view to_string(ControlSignal s);
std::optional<ControlSignal> signal_from_string(std::string_view s);  // case-insensitive

// One coach decision: a control signal plus a single-sentence instruction.
// The instruction may be empty only for NONE.
struct CoachOutput {
  ControlSignal signal = ControlSignal::NONE;
  std::string instruction;

  friend bool operator==(const CoachOutput&, const CoachOutput&) = default;
};

struct ParseError {
  std::string reason;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

using ParseResult = std::variant<CoachOutput, ParseError>;

// Canonical wire form: SIGNAL|instruction.
std::string serialize_output(const CoachOutput& out);

// Accepts exactly one content-bearing line: leading/trailing whitespace and
// blank lines are tolerated, anything else after the signal line is an error,
// as are a missing '|', an unknown signal, and an empty instruction paired
// with WARNING or ACTUATE.
ParseResult parse_response(std::string_view raw);

// What one inference produced, as seen by the planner. A deadline miss
// carries no coach output (the raw response is discarded).
struct InferenceOutcome {
  enum class Kind { Ok, DeadlineMiss, ParseFailure };
  Kind kind = Kind::Ok;
  CoachOutput output;
  std::int64_t latency_ns = 0;
  std::string detail;

  friend bool operator==(const InferenceOutcome&, const InferenceOutcome&) = default;
};

std::string trace_text(const InferenceOutcome& outcome);

}  // namespace coachsim::coach
