#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coachsim/backends/backend.hpp"

namespace coachsim::backends {

// One completion as stored in an inference trace: enough to re-run the
// simulation without the model. The digest ties the entry to the exact
// prompt that produced it.
struct InferenceRecord {
  std::uint64_t prompt_digest = 0;
  std::int64_t latency_ns = 0;
  std::string raw;

  friend bool operator==(const InferenceRecord&, const InferenceRecord&) = default;
};

// Inference trace file: one record per line,
// "<index>\t<digest hex>\t<latency_ns>\t<escaped raw>".
void write_inference_trace(const std::string& path,
                           const std::vector<InferenceRecord>& records);
std::vector<InferenceRecord> read_inference_trace(const std::string& path);

// Wraps a real backend and captures every completion. Transport failures
// are stored with an empty response and a latency pinned just past the
// deadline, so a replay reproduces the deadline miss the live run saw.
class RecordingBackend : public AgentBackend {
 public:
  RecordingBackend(AgentBackend& inner, std::int64_t deadline_ns);

  CompletionResult complete(const InferenceContext& ctx) override;

  const std::vector<InferenceRecord>& records() const { return records_; }

 private:
  AgentBackend& inner_;
  std::int64_t deadline_ns_;
  std::vector<InferenceRecord> records_;
};

// Serves a recorded run back, in order. Consuming past the end is a hard
// fault: the simulation asked a question the recording never answered. A
// prompt digest mismatch means the simulation diverged from the recorded
// one; by default it is reported through CompletionResult::divergence (the
// coach traces it), in strict mode it is fatal.
class ReplayBackend : public AgentBackend {
 public:
  explicit ReplayBackend(std::vector<InferenceRecord> records, bool strict = false);
  static ReplayBackend from_file(const std::string& path, bool strict = false);

  CompletionResult complete(const InferenceContext& ctx) override;

  std::size_t consumed() const { return next_; }
  std::size_t size() const { return records_.size(); }

 private:
  std::vector<InferenceRecord> records_;
  bool strict_;
  std::size_t next_ = 0;
};

}  // namespace coachsim::backends
