#include "coachsim/scenarios/success.hpp"

#include <cmath>
#include <sstream>

namespace coachsim::scenarios {

namespace {

std::ostringstream make_stream() {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  return os;
}

double seconds(std::int64_t ns) {
  return static_cast<double>(ns) / 1e9;
}

SuccessReport stop_sign(const ScenarioSpec& spec, const std::vector<TickSample>& samples) {
  const double window = 5.0;
  bool sampled_window = false;
  double slowest = 0.0;
  bool have_slowest = false;
  for (const TickSample& s : samples) {
    if (std::abs(s.displacement_m - spec.course_length_m) > window) continue;
    sampled_window = true;
    if (!have_slowest || s.velocity_mps < slowest) {
      slowest = s.velocity_mps;
      have_slowest = true;
    }
    if (s.velocity_mps <= 0.5) {
      auto os = make_stream();
      os << "stopped at s=" << s.displacement_m << " m with v=" << s.velocity_mps
         << " m/s (t=" << seconds(s.time_ns) << " s)";
      return {true, os.str()};
    }
  }
  auto os = make_stream();
  if (sampled_window) {
    os << "no stop: slowest tick inside s in [" << spec.course_length_m - window
       << ", " << spec.course_length_m + window << "] m was " << slowest << " m/s";
  } else {
    os << "no stop: the car never sampled inside s in ["
       << spec.course_length_m - window << ", " << spec.course_length_m + window
       << "] m";
  }
  return {false, os.str()};
}

SuccessReport speed_change(const ScenarioSpec& spec, const std::vector<TickSample>& samples) {
  for (const TickSample& s : samples) {
    if (s.displacement_m < spec.course_length_m) continue;
    double deviation = std::abs(s.velocity_mps - spec.target_v_mps);
    auto os = make_stream();
    os << "v=" << s.velocity_mps << " m/s at the first tick past s="
       << spec.course_length_m << " m (t=" << seconds(s.time_ns) << " s)";
    return {deviation <= 1.0, os.str()};
  }
  auto os = make_stream();
  os << "the car never reached s=" << spec.course_length_m << " m within the horizon";
  return {false, os.str()};
}

SuccessReport lane_change(const ScenarioSpec& spec, const std::vector<TickSample>& samples) {
  std::size_t crossing = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].displacement_m >= spec.course_length_m) {
      crossing = i;
      break;
    }
  }
  auto os = make_stream();
  if (crossing == samples.size()) {
    os << "the car never reached s=" << spec.course_length_m << " m within the horizon";
    return {false, os.str()};
  }
  for (std::size_t i = 0; i <= crossing; ++i) {
    double deviation = std::abs(samples[i].velocity_mps - spec.target_v_mps);
    if (deviation > spec.band_halfwidth_mps) {
      os << "velocity left the target band at t=" << seconds(samples[i].time_ns)
         << " s (v=" << samples[i].velocity_mps << " m/s, target "
         << spec.target_v_mps << " +/- " << spec.band_halfwidth_mps << ")";
      return {false, os.str()};
    }
  }
  const TickSample& at = samples[crossing];
  if (at.lane != plant::Lane::Right) {
    os << "still in the left lane at s=" << at.displacement_m << " m (t="
       << seconds(at.time_ns) << " s)";
    return {false, os.str()};
  }
  os << "right lane by s=" << at.displacement_m << " m with velocity inside "
     << spec.target_v_mps << " +/- " << spec.band_halfwidth_mps << " m/s";
  return {true, os.str()};
}

}  // namespace

SuccessReport evaluate_success(const ScenarioSpec& spec,
                               const std::vector<TickSample>& samples) {
  switch (spec.kind) {
    case ScenarioKind::StopSign: return stop_sign(spec, samples);
    case ScenarioKind::SpeedChange: return speed_change(spec, samples);
    case ScenarioKind::LaneChange: return lane_change(spec, samples);
  }
  return {false, "unknown scenario kind"};
}

}  // namespace coachsim::scenarios
