#pragma once

#include <cstdint>
#include <string>

#include "coachsim/plant/types.hpp"

namespace coachsim::coach {

// A fully instantiated prompt: what gets digested, recorded, and sent.
struct PromptDoc {
  std::string system_text;
  std::string user_text;
  int max_tokens = 30;
  double temperature = 0.0;

  friend bool operator==(const PromptDoc&, const PromptDoc&) = default;
};

// Runtime values substituted into a template.
struct PromptInputs {
  double velocity_mps = 0.0;
  double displacement_m = 0.0;
  plant::SteerPos steer = plant::SteerPos::Center;
  plant::HeadPos head = plant::HeadPos::Center;
  double envelope_lower = 0.0;
  double envelope_upper = 0.0;
};

// A per-scenario prompt template: a [system] section and a [user] section
// with {placeholder} substitution. Numeric placeholders render with fixed
// two-decimal formatting; pose placeholders render enumeration names.
// Structure and placeholder names are validated at load, so instantiation
// cannot fail at runtime.
class PromptTemplate {
 public:
  static PromptTemplate load(const std::string& path);
  static PromptTemplate from_strings(std::string system_tpl, std::string user_tpl);

  PromptDoc build(const PromptInputs& inputs) const;

 private:
  PromptTemplate() = default;

  std::string system_tpl_;
  std::string user_tpl_;
};

// Stable 64-bit FNV-1a digest over the prompt's exact bytes plus its
// generation options; the inference-trace file format depends on it.
std::uint64_t prompt_digest(const PromptDoc& doc);

std::string digest_hex(std::uint64_t digest);

}  // namespace coachsim::coach
