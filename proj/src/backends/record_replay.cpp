#include "coachsim/backends/record_replay.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

#include "coachsim/coach/prompt.hpp"
#include "coachsim/error.hpp"
#include "coachsim/runtime/trace.hpp"

namespace coachsim::backends {

namespace {

[[noreturn]] void file_error(const std::string& path, std::size_t lineno,
                             const std::string& msg) {
  throw ConfigError("inference trace '" + path + "' line " + std::to_string(lineno + 1) +
                    ": " + msg);
}

}  // namespace

void write_inference_trace(const std::string& path,
                           const std::vector<InferenceRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("cannot write inference trace '" + path + "'");
  for (std::size_t i = 0; i < records.size(); ++i) {
    out << i << '\t' << coach::digest_hex(records[i].prompt_digest) << '\t'
        << records[i].latency_ns << '\t' << runtime::escape_field(records[i].raw) << '\n';
  }
  if (!out.flush()) throw ConfigError("cannot write inference trace '" + path + "'");
}

std::vector<InferenceRecord> read_inference_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open inference trace '" + path + "'");
  std::vector<InferenceRecord> records;
  std::string line;
  std::size_t lineno = 0;
  for (; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::string_view fields[4];
    std::string_view rest = line;
    for (int f = 0; f < 3; ++f) {
      auto tab = rest.find('\t');
      if (tab == std::string_view::npos) file_error(path, lineno, "expected 4 fields");
      fields[f] = rest.substr(0, tab);
      rest = rest.substr(tab + 1);
    }
    fields[3] = rest;

    std::size_t index = 0;
    auto [iend, iec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), index);
    if (iec != std::errc{} || iend != fields[0].data() + fields[0].size() || index != records.size()) {
      file_error(path, lineno, "bad index '" + std::string(fields[0]) + "'");
    }

    InferenceRecord rec;
    if (fields[1].size() != 16) file_error(path, lineno, "bad digest length");
    auto [dend, dec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(),
                                       rec.prompt_digest, 16);
    if (dec != std::errc{} || dend != fields[1].data() + fields[1].size()) {
      file_error(path, lineno, "bad digest '" + std::string(fields[1]) + "'");
    }

    auto [lend, lec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), rec.latency_ns);
    if (lec != std::errc{} || lend != fields[2].data() + fields[2].size() || rec.latency_ns < 0) {
      file_error(path, lineno, "bad latency '" + std::string(fields[2]) + "'");
    }

    rec.raw = runtime::unescape_field(fields[3]);
    records.push_back(std::move(rec));
  }
  return records;
}

RecordingBackend::RecordingBackend(AgentBackend& inner, std::int64_t deadline_ns)
    : inner_(inner), deadline_ns_(deadline_ns) {}

CompletionResult RecordingBackend::complete(const InferenceContext& ctx) {
  CompletionResult res = inner_.complete(ctx);
  if (res.status == CompletionResult::Status::TransportError) {
    res.latency_ns = normalize_transport_latency(res.latency_ns, deadline_ns_);
    res.raw.clear();
  }
  records_.push_back({coach::prompt_digest(ctx.prompt), res.latency_ns, res.raw});
  return res;
}

ReplayBackend::ReplayBackend(std::vector<InferenceRecord> records, bool strict)
    : records_(std::move(records)), strict_(strict) {}

ReplayBackend ReplayBackend::from_file(const std::string& path, bool strict) {
  return ReplayBackend(read_inference_trace(path), strict);
}

CompletionResult ReplayBackend::complete(const InferenceContext& ctx) {
  if (next_ >= records_.size()) {
    throw FatalError("inference trace exhausted after " + std::to_string(records_.size()) +
                     " completions; the replayed run asked for more");
  }
  const InferenceRecord& rec = records_[next_];
  std::uint64_t live = coach::prompt_digest(ctx.prompt);
  CompletionResult res;
  if (live != rec.prompt_digest) {
    std::ostringstream os;
    os << "prompt digest mismatch at index " << next_ << ": recorded "
       << coach::digest_hex(rec.prompt_digest) << ", live " << coach::digest_hex(live);
    if (strict_) throw FatalError(os.str());
    res.divergence = os.str();
  }
  ++next_;
  res.raw = rec.raw;
  res.latency_ns = rec.latency_ns;
  return res;
}

}  // namespace coachsim::backends
