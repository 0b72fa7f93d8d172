#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coachsim/driver/types.hpp"
#include "coachsim/plant/types.hpp"
#include "coachsim/runtime/tag.hpp"

namespace coachsim::scenarios {

enum class ScenarioKind { StopSign, SpeedChange, LaneChange };

std::string_view to_string(ScenarioKind k);
std::optional<ScenarioKind> kind_from_string(std::string_view s);

// One row of the driver script: the command held from from_time_ns until the
// next segment starts (the last segment persists to the horizon).
struct ScriptSegment {
  std::int64_t from_time_ns = 0;
  plant::DriverCommand command;

  friend bool operator==(const ScriptSegment&, const ScriptSegment&) = default;
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::StopSign;
  double course_length_m = 100.0;
  double v0_mps = 0.0;
  double target_v_mps = 0.0;
  double band_halfwidth_mps = 2.0;
  std::int64_t deadline_ns = 250 * runtime::ns_per_ms;
  std::int64_t horizon_ns = 60 * runtime::ns_per_s;
  std::int64_t directive_hold_ns = 2 * runtime::ns_per_s;
  plant::Lane initial_lane = plant::Lane::Right;
  std::string prompt_template_path;
  std::vector<ScriptSegment> script;
  // File-supplied overrides; merged over the driver's built-in table.
  std::map<driver::Directive, plant::DriverCommand> compliance;
};

// Parses a scenario file: top-level key = value pairs followed by a [script]
// table and an optional [compliance] table. Throws ConfigError naming the
// offending key or row.
ScenarioSpec load_scenario(const std::string& path);

}  // namespace coachsim::scenarios
