#pragma once

#include <stdexcept>
#include <string>

namespace coachsim {

// Unrecoverable runtime violation (scheduling into the past, double port
// write, replay exhaustion in strict mode, ...). The simulation aborts.
class FatalError : public std::runtime_error {
 public:
  explicit FatalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected configuration: bad topology, malformed scenario file, missing
// prompt placeholder. Raised before or while building a model, never
// mid-simulation.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace coachsim
