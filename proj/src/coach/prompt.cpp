#include "coachsim/coach/prompt.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "coachsim/error.hpp"
#include "coachsim/runtime/value.hpp"

namespace coachsim::coach {

namespace {

constexpr std::string_view kPlaceholders[] = {
    "velocity", "displacement", "steer", "head", "envelope_lower", "envelope_upper",
};

bool known_placeholder(std::string_view name) {
  for (std::string_view p : kPlaceholders) {
    if (p == name) return true;
  }
  return false;
}

// Validates brace syntax and placeholder names; returns nothing, throws
// ConfigError naming the problem.
void validate_template(std::string_view text, const char* section) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    auto close = text.find('}', i + 1);
    if (close == std::string_view::npos) {
      throw ConfigError(std::string("prompt template: unterminated placeholder in [") +
                        section + "] section");
    }
    std::string_view name = text.substr(i + 1, close - i - 1);
    if (!known_placeholder(name)) {
      throw ConfigError(std::string("prompt template: unknown placeholder {") +
                        std::string(name) + "} in [" + section + "] section");
    }
    i = close;
  }
}

void require_placeholder(std::string_view text, std::string_view name) {
  std::string token = "{" + std::string(name) + "}";
  if (text.find(token) == std::string_view::npos) {
    throw ConfigError("prompt template: [user] section must contain " + token);
  }
}

std::string two_decimals(double v) {
  std::array<char, 64> buf{};
  int n = std::snprintf(buf.data(), buf.size(), "%.2f", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string substitute(std::string_view tpl, const PromptInputs& in) {
  std::string out;
  out.reserve(tpl.size() + 32);
  for (std::size_t i = 0; i < tpl.size(); ++i) {
    if (tpl[i] != '{') {
      out += tpl[i];
      continue;
    }
    auto close = tpl.find('}', i + 1);
    std::string_view name = tpl.substr(i + 1, close - i - 1);
    if (name == "velocity") {
      out += two_decimals(in.velocity_mps);
    } else if (name == "displacement") {
      out += two_decimals(in.displacement_m);
    } else if (name == "steer") {
      out += plant::to_string(in.steer);
    } else if (name == "head") {
      out += plant::to_string(in.head);
    } else if (name == "envelope_lower") {
      out += two_decimals(in.envelope_lower);
    } else {
      out += two_decimals(in.envelope_upper);
    }
    i = close;
  }
  return out;
}

std::string trim_outer_blank_lines(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' ||
                           text.back() == ' ' || text.back() == '\t')) {
    text.pop_back();
  }
  std::size_t start = 0;
  while (start < text.size() && (text[start] == '\n' || text[start] == '\r')) ++start;
  return text.substr(start);
}

}  // namespace

PromptTemplate PromptTemplate::from_strings(std::string system_tpl, std::string user_tpl) {
  system_tpl = trim_outer_blank_lines(std::move(system_tpl));
  user_tpl = trim_outer_blank_lines(std::move(user_tpl));
  if (system_tpl.empty()) throw ConfigError("prompt template: empty [system] section");
  if (user_tpl.empty()) throw ConfigError("prompt template: empty [user] section");
  validate_template(system_tpl, "system");
  validate_template(user_tpl, "user");
  require_placeholder(user_tpl, "velocity");
  require_placeholder(user_tpl, "displacement");
  require_placeholder(user_tpl, "steer");
  require_placeholder(user_tpl, "head");
  PromptTemplate t;
  t.system_tpl_ = std::move(system_tpl);
  t.user_tpl_ = std::move(user_tpl);
  return t;
}

PromptTemplate PromptTemplate::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open prompt template '" + path + "'");
  std::string system_tpl;
  std::string user_tpl;
  std::string* current = nullptr;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "[system]") {
      current = &system_tpl;
      continue;
    }
    if (line == "[user]") {
      current = &user_tpl;
      continue;
    }
    if (current == nullptr) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      throw ConfigError("prompt template '" + path + "': content before the first section header");
    }
    *current += line;
    *current += '\n';
  }
  try {
    return from_strings(std::move(system_tpl), std::move(user_tpl));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " (in '" + path + "')");
  }
}

PromptDoc PromptTemplate::build(const PromptInputs& inputs) const {
  PromptDoc doc;
  doc.system_text = substitute(system_tpl_, inputs);
  doc.user_text = substitute(user_tpl_, inputs);
  return doc;
}

std::uint64_t prompt_digest(const PromptDoc& doc) {
  constexpr std::uint64_t offset = 14695981039346656037ull;
  constexpr std::uint64_t prime = 1099511628211ull;
  std::uint64_t h = offset;
  auto mix = [&h](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= prime;
    }
  };
  mix(doc.system_text);
  mix("\x1f");
  mix(doc.user_text);
  mix("\x1f");
  mix(std::to_string(doc.max_tokens));
  mix("\x1f");
  mix(runtime::trace_text(doc.temperature));
  return h;
}

std::string digest_hex(std::uint64_t digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[digest & 0xf];
    digest >>= 4;
  }
  return out;
}

}  // namespace coachsim::coach
