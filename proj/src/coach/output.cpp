#include "coachsim/coach/output.hpp"

#include <cctype>
#include <sstream>

#include "coachsim/runtime/value.hpp"

namespace coachsim::coach {

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(ControlSignal s) {
  switch (s) {
    case ControlSignal::NONE: return "NONE";
    case ControlSignal::WARNING: return "WARNING";
    case ControlSignal::ACTUATE: return "ACTUATE";
  }
  return "?";
}

std::optional<ControlSignal> signal_from_string(std::string_view s) {
  std::string canon = lower(s);
  if (canon == "none") return ControlSignal::NONE;
  if (canon == "warning") return ControlSignal::WARNING;
  if (canon == "actuate") return ControlSignal::ACTUATE;
  return std::nullopt;
}

std::string serialize_output(const CoachOutput& out) {
  std::string s(to_string(out.signal));
  s += '|';
  s += out.instruction;
  return s;
}

ParseResult parse_response(std::string_view raw) {
  std::string_view rest = raw;
  std::string_view line;
  bool found = false;
  while (!rest.empty() || !found) {
    auto nl = rest.find('\n');
    std::string_view candidate = nl == std::string_view::npos ? rest : rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    candidate = trim(candidate);
    if (candidate.empty()) {
      if (rest.empty()) break;
      continue;
    }
    if (found) return ParseError{"content after the first line"};
    line = candidate;
    found = true;
  }
  if (!found) return ParseError{"empty response"};

  auto sep = line.find('|');
  if (sep == std::string_view::npos) return ParseError{"missing '|' separator"};
  std::string_view signal_text = trim(line.substr(0, sep));
  std::string_view instruction = trim(line.substr(sep + 1));
  auto signal = signal_from_string(signal_text);
  if (!signal) return ParseError{"unknown signal '" + std::string(signal_text) + "'"};
  if (instruction.empty() && *signal != ControlSignal::NONE) {
    return ParseError{"empty instruction for " + std::string(to_string(*signal))};
  }
  return CoachOutput{*signal, std::string(instruction)};
}

std::string trace_text(const InferenceOutcome& outcome) {
  std::ostringstream os;
  switch (outcome.kind) {
    case InferenceOutcome::Kind::Ok:
      os << "ok " << serialize_output(outcome.output);
      break;
    case InferenceOutcome::Kind::DeadlineMiss:
      os << "deadline-miss";
      break;
    case InferenceOutcome::Kind::ParseFailure:
      os << "parse-error " << outcome.detail;
      break;
  }
  // A miss's detail (e.g. transport error text) is deliberately left out:
  // the inference trace has no column for it, so replayed runs could not
  // reproduce it byte for byte.
  os << " latency_ns=" << runtime::trace_text(outcome.latency_ns);
  return os.str();
}

}  // namespace coachsim::coach
