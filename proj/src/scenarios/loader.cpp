#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coachsim/error.hpp"
#include "coachsim/scenarios/scenario.hpp"

namespace coachsim::scenarios {

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::StopSign: return "StopSign";
    case ScenarioKind::SpeedChange: return "SpeedChange";
    case ScenarioKind::LaneChange: return "LaneChange";
  }
  return "?";
}

std::optional<ScenarioKind> kind_from_string(std::string_view s) {
  if (s == "StopSign") return ScenarioKind::StopSign;
  if (s == "SpeedChange") return ScenarioKind::SpeedChange;
  if (s == "LaneChange") return ScenarioKind::LaneChange;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  const char* ws = " \t\r";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return "";
  auto end = s.find_last_not_of(ws);
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

class Parser {
 public:
  explicit Parser(std::string path) : path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("scenario file '" + path_ + "': " + msg);
  }

  double number(const std::string& text, const std::string& where) const {
    double out = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
      fail(where + ": expected a number, got '" + text + "'");
    }
    return out;
  }

  plant::DriverCommand command(const std::vector<std::string>& fields,
                               std::size_t first, const std::string& where) const {
    plant::DriverCommand cmd;
    auto accel = plant::accelerator_from_string(fields[first]);
    if (!accel) fail(where + ": unknown accelerator '" + fields[first] + "'");
    auto brake = plant::brake_from_string(fields[first + 1]);
    if (!brake) fail(where + ": unknown brake '" + fields[first + 1] + "'");
    auto head = plant::head_from_string(fields[first + 2]);
    if (!head) fail(where + ": unknown head position '" + fields[first + 2] + "'");
    auto steer = plant::steer_from_string(fields[first + 3]);
    if (!steer) fail(where + ": unknown steer position '" + fields[first + 3] + "'");
    cmd.accelerator = *accel;
    cmd.brake = *brake;
    cmd.head = *head;
    cmd.steer = *steer;
    return cmd;
  }

 private:
  std::string path_;
};

std::int64_t seconds_to_ns(double s) {
  return std::llround(s * 1e9);
}

}  // namespace

ScenarioSpec load_scenario(const std::string& path) {
  Parser p(path);
  std::ifstream in(path);
  if (!in) p.fail("cannot open file");

  ScenarioSpec spec;
  std::optional<ScenarioKind> kind;
  std::optional<double> v0;
  std::optional<double> target;
  std::optional<std::string> prompt;
  std::set<std::string> seen_keys;
  std::set<driver::Directive> seen_directives;

  enum class Section { Top, Script, Compliance };
  Section section = Section::Top;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string text = trim(line);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text == "[script]") {
        section = Section::Script;
      } else if (text == "[compliance]") {
        section = Section::Compliance;
      } else {
        p.fail("unknown section '" + text + "'");
      }
      continue;
    }

    if (section == Section::Top) {
      auto eq = text.find('=');
      if (eq == std::string::npos) p.fail("expected 'key = value', got '" + text + "'");
      std::string key = trim(text.substr(0, eq));
      std::string value = trim(text.substr(eq + 1));
      if (key.empty()) p.fail("empty key in '" + text + "'");
      if (value.empty()) p.fail("key '" + key + "': empty value");
      if (!seen_keys.insert(key).second) p.fail("duplicate key '" + key + "'");

      if (key == "id") {
        kind = kind_from_string(value);
        if (!kind) p.fail("key 'id': unknown scenario id '" + value + "'");
      } else if (key == "course_length_m") {
        spec.course_length_m = p.number(value, "key 'course_length_m'");
        if (spec.course_length_m <= 0.0) p.fail("key 'course_length_m': must be > 0");
      } else if (key == "v0_mps") {
        v0 = p.number(value, "key 'v0_mps'");
        if (*v0 < 0.0) p.fail("key 'v0_mps': must be >= 0");
      } else if (key == "target_v_mps") {
        target = p.number(value, "key 'target_v_mps'");
        if (*target < 0.0) p.fail("key 'target_v_mps': must be >= 0");
      } else if (key == "band_halfwidth_mps") {
        spec.band_halfwidth_mps = p.number(value, "key 'band_halfwidth_mps'");
        if (spec.band_halfwidth_mps <= 0.0) p.fail("key 'band_halfwidth_mps': must be > 0");
      } else if (key == "deadline_ms") {
        double ms = p.number(value, "key 'deadline_ms'");
        if (ms <= 0.0) p.fail("key 'deadline_ms': must be > 0");
        spec.deadline_ns = std::llround(ms * 1e6);
      } else if (key == "horizon_s") {
        double s = p.number(value, "key 'horizon_s'");
        if (s <= 0.0) p.fail("key 'horizon_s': must be > 0");
        spec.horizon_ns = seconds_to_ns(s);
      } else if (key == "directive_hold_s") {
        double s = p.number(value, "key 'directive_hold_s'");
        if (s < 0.0) p.fail("key 'directive_hold_s': must be >= 0");
        spec.directive_hold_ns = seconds_to_ns(s);
      } else if (key == "initial_lane") {
        auto lane = plant::lane_from_string(value);
        if (!lane) p.fail("key 'initial_lane': unknown lane '" + value + "'");
        spec.initial_lane = *lane;
      } else if (key == "prompt_template") {
        prompt = value;
      } else {
        p.fail("unknown key '" + key + "'");
      }
      continue;
    }

    std::vector<std::string> fields = split_fields(text);
    if (section == Section::Script) {
      std::string where = "script[" + std::to_string(spec.script.size()) + "]";
      if (fields.size() != 5) {
        p.fail(where + ": expected 'from_s accelerator brake head steer', got " +
               std::to_string(fields.size()) + " fields");
      }
      ScriptSegment seg;
      double from_s = p.number(fields[0], where + " from_s");
      if (from_s < 0.0) p.fail(where + ": from_s must be >= 0");
      seg.from_time_ns = seconds_to_ns(from_s);
      seg.command = p.command(fields, 1, where);
      if (spec.script.empty()) {
        if (seg.from_time_ns != 0) p.fail(where + ": first segment must start at time 0");
      } else if (seg.from_time_ns <= spec.script.back().from_time_ns) {
        p.fail(where + ": from_s does not increase past the previous segment");
      }
      spec.script.push_back(seg);
    } else {
      std::string where = "compliance[" + std::to_string(seen_directives.size()) + "]";
      if (fields.size() != 5) {
        p.fail(where + ": expected 'directive accelerator brake head steer', got " +
               std::to_string(fields.size()) + " fields");
      }
      auto directive = driver::directive_from_string(fields[0]);
      if (!directive) p.fail(where + ": unknown directive '" + fields[0] + "'");
      if (*directive == driver::Directive::NoOp) {
        p.fail(where + ": directive 'NoOp' cannot be overridden");
      }
      if (!seen_directives.insert(*directive).second) {
        p.fail(where + ": duplicate directive '" + fields[0] + "'");
      }
      spec.compliance[*directive] = p.command(fields, 1, where);
    }
  }

  if (!kind) p.fail("missing required key 'id'");
  if (!v0) p.fail("missing required key 'v0_mps'");
  if (!prompt) p.fail("missing required key 'prompt_template'");
  if (spec.script.empty()) p.fail("missing [script] section with at least one segment");
  if (*kind == ScenarioKind::SpeedChange && !target) {
    p.fail("missing required key 'target_v_mps' (SpeedChange needs a goal velocity)");
  }

  spec.kind = *kind;
  spec.v0_mps = *v0;
  if (target) {
    spec.target_v_mps = *target;
  } else {
    spec.target_v_mps = *kind == ScenarioKind::StopSign ? 0.0 : spec.v0_mps;
  }
  spec.prompt_template_path =
      (std::filesystem::path(path).parent_path() / *prompt).string();
  return spec;
}

}  // namespace coachsim::scenarios
