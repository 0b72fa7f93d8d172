#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace coachsim::runtime {

inline constexpr std::int64_t ns_per_ms = 1'000'000;
inline constexpr std::int64_t ns_per_s = 1'000'000'000;

// Logical time: nanoseconds plus a microstep. Tags are totally ordered by
// (time_ns, microstep); a zero-delay hop advances the microstep only.
struct Tag {
  std::int64_t time_ns = 0;
  std::uint64_t microstep = 0;

  friend auto operator<=>(const Tag&, const Tag&) = default;

  // Delivery tag for an event emitted at this tag with the given delay.
  // delay == 0 advances one microstep; delay > 0 resets the microstep.
  Tag delayed(std::int64_t delay_ns) const {
    if (delay_ns == 0) return Tag{time_ns, microstep + 1};
    return Tag{time_ns + delay_ns, 0};
  }
};

std::string to_string(const Tag& tag);  // "<time_ns>.<microstep>"

}  // namespace coachsim::runtime
