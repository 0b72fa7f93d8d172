#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coachsim/backends/bench.hpp"
#include "coachsim/backends/live.hpp"
#include "coachsim/backends/oracle.hpp"
#include "coachsim/backends/record_replay.hpp"
#include "coachsim/coach/prompt.hpp"
#include "coachsim/error.hpp"
#include "coachsim/runtime/value.hpp"
#include "coachsim/scenarios/scenario.hpp"
#include "coachsim/sim/model.hpp"

namespace {

using namespace coachsim;

constexpr const char* kEndpointEnv = "COACHSIM_ENDPOINT";

struct Options {
  std::string scenario = "stop-sign";
  std::string backend = "oracle";
  std::int64_t deadline_ms = 0;  // 0: the scenario's deadline
  double horizon_s = 0.0;        // 0: the scenario's horizon
  std::string record_path;
  std::string trace_out;
  std::string csv_out;
  int runs = 0;  // 0: the command's default
  bool strict_replay = false;
  std::string endpoint;
  std::string model;
};

struct BackendSpec {
  enum class Kind { Oracle, Replay, Live };
  Kind kind = Kind::Oracle;
  std::string trace_path;
  std::string endpoint;
  std::string model;
};

std::string default_endpoint() {
  const char* env = std::getenv(kEndpointEnv);
  return env ? env : "";
}

// `--backend oracle | replay:<trace file> | live:<endpoint>,<model>`; the
// live pieces may instead come from --endpoint/--model, and the endpoint
// alone may fall back to the environment.
BackendSpec parse_backend(const Options& opt) {
  const std::string& arg = opt.backend;
  BackendSpec spec;
  if (arg == "oracle") return spec;
  if (arg.rfind("replay:", 0) == 0) {
    spec.kind = BackendSpec::Kind::Replay;
    spec.trace_path = arg.substr(7);
    if (spec.trace_path.empty())
      throw ConfigError("replay backend requires a trace file: replay:<trace file>");
    return spec;
  }
  if (arg == "live" || arg.rfind("live:", 0) == 0) {
    spec.kind = BackendSpec::Kind::Live;
    std::string rest = arg.size() > 5 ? arg.substr(5) : "";
    auto comma = rest.find(',');
    spec.endpoint = rest.substr(0, comma);
    if (comma != std::string::npos) spec.model = rest.substr(comma + 1);
    if (spec.endpoint.empty()) spec.endpoint = opt.endpoint;
    if (spec.endpoint.empty()) spec.endpoint = default_endpoint();
    if (spec.model.empty()) spec.model = opt.model;
    if (spec.endpoint.empty())
      throw ConfigError(std::string("live backend requires an endpoint (--endpoint or ") +
                        kEndpointEnv + ")");
    if (spec.model.empty()) throw ConfigError("live backend requires a model (--model)");
    return spec;
  }
  throw ConfigError("unknown backend '" + arg +
                    "': expected oracle, replay:<trace file>, or live:<endpoint>,<model>");
}

std::unique_ptr<backends::AgentBackend> make_backend(const BackendSpec& spec,
                                                     bool strict_replay) {
  switch (spec.kind) {
    case BackendSpec::Kind::Oracle:
      return std::make_unique<backends::OracleBackend>();
    case BackendSpec::Kind::Replay:
      return std::make_unique<backends::ReplayBackend>(
          backends::ReplayBackend::from_file(spec.trace_path, strict_replay));
    case BackendSpec::Kind::Live:
      return std::make_unique<backends::LiveBackend>(
          backends::LiveConfig{spec.endpoint, spec.model});
  }
  throw ConfigError("unhandled backend kind");
}

// A scenario names either a file or a bundled id (stop-sign, speed-change,
// lane-change); ids are searched next to the working directory first, then
// in the source tree's bundle.
std::string resolve_scenario(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  std::string stem = arg;
  for (char& c : stem)
    if (c == '-') c = '_';
  for (const char* dir : {"scenarios", COACHSIM_SCENARIO_DIR}) {
    fs::path candidate = fs::path(dir) / (stem + ".scenario");
    if (fs::exists(candidate)) return candidate.string();
  }
  throw ConfigError("no scenario '" + arg +
                    "': pass a file path or one of stop-sign, speed-change, lane-change");
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out.good()) throw ConfigError("cannot write " + path);
}

std::string ms_text(std::int64_t ns) {
  return runtime::trace_text(static_cast<double>(ns) / runtime::ns_per_ms);
}

sim::ModelConfig model_config(const Options& opt, const scenarios::ScenarioSpec& spec,
                              const coach::PromptTemplate& tpl) {
  sim::ModelConfig cfg;
  cfg.scenario = &spec;
  cfg.prompt = &tpl;
  cfg.deadline_ns = opt.deadline_ms > 0 ? opt.deadline_ms * runtime::ns_per_ms : 0;
  cfg.horizon_ns =
      opt.horizon_s > 0 ? std::llround(opt.horizon_s * runtime::ns_per_s) : 0;
  return cfg;
}

int cmd_run(const Options& opt) {
  auto spec = scenarios::load_scenario(resolve_scenario(opt.scenario));
  auto tpl = coach::PromptTemplate::load(spec.prompt_template_path);
  BackendSpec backend_spec = parse_backend(opt);
  auto backend = make_backend(backend_spec, opt.strict_replay);

  sim::ModelConfig cfg = model_config(opt, spec, tpl);
  // The recorder pins a failed transport's latency just past the deadline
  // the coach actually ran with, so record with the effective one.
  std::optional<backends::RecordingBackend> recorder;
  if (!opt.record_path.empty())
    recorder.emplace(*backend, cfg.deadline_ns > 0 ? cfg.deadline_ns : spec.deadline_ns);
  cfg.backend = recorder ? &*recorder : backend.get();

  sim::RunResult result = sim::run_model(cfg);

  if (!opt.trace_out.empty()) write_file(opt.trace_out, result.trace_text());
  if (!opt.csv_out.empty()) write_file(opt.csv_out, sim::csv_text(spec, result));
  if (recorder) backends::write_inference_trace(opt.record_path, recorder->records());

  const auto& c = result.counts;
  std::printf("%s: %s - %s\n", std::string(scenarios::to_string(spec.kind)).c_str(),
              result.success.pass ? "PASS" : "FAIL", result.success.detail.c_str());
  std::printf(
      "instructions=%d suppressed=%d deadline_misses=%d fallbacks=%d actuations=%d "
      "skipped_triggers=%d replay_divergences=%d\n",
      c.instructions, c.suppressed, c.deadline_misses, c.fallbacks, c.actuations,
      c.skipped_triggers, c.replay_divergences);
  return 0;
}

int cmd_verify(const Options& opt) {
  BackendSpec backend_spec = parse_backend(opt);
  if (backend_spec.kind == BackendSpec::Kind::Live)
    throw ConfigError(
        "verify refuses a live backend: completions are not a deterministic input "
        "source; record a run and verify replay:<trace file>");

  auto spec = scenarios::load_scenario(resolve_scenario(opt.scenario));
  auto tpl = coach::PromptTemplate::load(spec.prompt_template_path);
  sim::ModelConfig cfg = model_config(opt, spec, tpl);
  const int runs = opt.runs > 0 ? opt.runs : 10;

  sim::VerifyReport report = sim::verify_determinism(
      cfg, [&] { return make_backend(backend_spec, opt.strict_replay); }, runs);

  if (report.pass) {
    std::printf("PASS: %d runs produced byte-identical traces\n", report.runs);
    return 0;
  }
  std::printf("FAIL: run %d diverges from run 0 at %s\n", report.divergent_run,
              report.divergence.c_str());
  return 1;
}

int cmd_bench(const Options& opt) {
  std::string endpoint = !opt.endpoint.empty() ? opt.endpoint : default_endpoint();
  if (endpoint.empty())
    throw ConfigError(std::string("bench requires an endpoint (--endpoint or ") +
                      kEndpointEnv + ")");
  if (opt.model.empty()) throw ConfigError("bench requires a model (--model)");

  auto spec = scenarios::load_scenario(resolve_scenario(opt.scenario));
  auto tpl = coach::PromptTemplate::load(spec.prompt_template_path);
  const int runs = opt.runs > 0 ? opt.runs : 300;

  backends::LiveBackend backend(backends::LiveConfig{endpoint, opt.model});
  backends::BenchReport report = backends::bench_run(backend, spec, tpl, runs);

  std::printf("%zu/%d completions succeeded, %d failed\n", report.latencies_ns.size(),
              runs, report.failures);
  if (report.latencies_ns.empty()) {
    std::fprintf(stderr, "error: no completion succeeded\n");
    return 1;
  }
  std::printf("latency ms: min=%s median=%s p95=%s max=%s\n",
              ms_text(report.min_ns).c_str(), ms_text(report.median_ns).c_str(),
              ms_text(report.p95_ns).c_str(), ms_text(report.max_ns).c_str());
  std::printf("suggested deadline: %s ms (worst case observed)\n",
              ms_text(report.suggested_deadline_ns).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic agentic driving-coach simulator"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* run = app.add_subcommand("run", "simulate a scenario and export artifacts");
  run->add_option("--scenario", opt.scenario, "scenario file or bundled id");
  run->add_option("--backend", opt.backend,
                  "oracle | replay:<trace file> | live:<endpoint>,<model>");
  run->add_option("--deadline-ms", opt.deadline_ms, "inference deadline override");
  run->add_option("--horizon-s", opt.horizon_s, "simulation horizon override");
  run->add_option("--record", opt.record_path, "write the inference trace here");
  run->add_option("--trace-out", opt.trace_out, "write the event trace here");
  run->add_option("--csv-out", opt.csv_out, "write the per-tick table here");
  run->add_flag("--strict-replay", opt.strict_replay,
                "abort on replay divergence instead of tracing it");
  run->add_option("--endpoint", opt.endpoint, "live completion endpoint");
  run->add_option("--model", opt.model, "live model name");

  CLI::App* verify =
      app.add_subcommand("verify", "re-run a deterministic backend and compare traces");
  verify->add_option("--scenario", opt.scenario, "scenario file or bundled id");
  verify->add_option("--backend", opt.backend, "oracle | replay:<trace file>");
  verify->add_option("--deadline-ms", opt.deadline_ms, "inference deadline override");
  verify->add_option("--horizon-s", opt.horizon_s, "simulation horizon override");
  verify->add_option("--runs", opt.runs, "runs to compare (default 10)");
  verify->add_flag("--strict-replay", opt.strict_replay,
                   "abort on replay divergence instead of tracing it");

  CLI::App* bench =
      app.add_subcommand("bench", "measure completion latency for deadline selection");
  bench->add_option("--scenario", opt.scenario, "scenario whose prompt is benchmarked");
  bench->add_option("--endpoint", opt.endpoint, "completion endpoint");
  bench->add_option("--model", opt.model, "model name");
  bench->add_option("--runs", opt.runs, "completions to issue (default 300)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (bench->parsed()) return cmd_bench(opt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fatal: %s\n", e.what());
    return 1;
  }
  return 0;
}
