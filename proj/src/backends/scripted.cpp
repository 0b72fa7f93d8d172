#include "coachsim/backends/scripted.hpp"

#include <utility>

#include "coachsim/error.hpp"

namespace coachsim::backends {

ScriptedBackend::ScriptedBackend(std::vector<ScriptedReply> replies)
    : replies_(std::move(replies)) {
  if (replies_.empty()) throw ConfigError("scripted backend needs at least one reply");
}

CompletionResult ScriptedBackend::complete(const InferenceContext&) {
  const ScriptedReply& r = replies_[calls_ < replies_.size() ? calls_ : replies_.size() - 1];
  ++calls_;
  CompletionResult res;
  res.status = r.transport_error ? CompletionResult::Status::TransportError
                                 : CompletionResult::Status::Ok;
  res.raw = r.raw;
  res.latency_ns = r.latency_ns;
  res.error = r.error;
  return res;
}

}  // namespace coachsim::backends
