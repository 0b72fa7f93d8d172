#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "coachsim/backends/backend.hpp"
#include "coachsim/backends/bench.hpp"
#include "coachsim/backends/live.hpp"
#include "coachsim/backends/oracle.hpp"
#include "coachsim/backends/record_replay.hpp"
#include "coachsim/backends/scripted.hpp"
#include "coachsim/coach/reactors.hpp"
#include "coachsim/error.hpp"
#include "coachsim/plant/kinematics.hpp"
#include "coachsim/runtime/kernel.hpp"
#include "coachsim/scenarios/envelope.hpp"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

using namespace coachsim;
using namespace coachsim::backends;
using coach::ControlSignal;
using runtime::Kernel;
using runtime::PortKind;
using runtime::ReactionContext;
using runtime::Tag;
using runtime::Value;

namespace {

constexpr std::int64_t ms = runtime::ns_per_ms;

scenarios::ScenarioSpec speed_spec() {
  scenarios::ScenarioSpec spec;
  spec.kind = scenarios::ScenarioKind::SpeedChange;
  spec.course_length_m = 100.0;
  spec.v0_mps = 18.0;
  spec.target_v_mps = 11.0;
  spec.band_halfwidth_mps = 2.0;
  spec.script.push_back({0, plant::DriverCommand{}});
  return spec;
}

scenarios::ScenarioSpec lane_spec() {
  scenarios::ScenarioSpec spec;
  spec.kind = scenarios::ScenarioKind::LaneChange;
  spec.course_length_m = 100.0;
  spec.v0_mps = 18.0;
  spec.target_v_mps = 18.0;
  spec.band_halfwidth_mps = 2.0;
  spec.initial_lane = plant::Lane::Left;
  spec.script.push_back({0, plant::DriverCommand{}});
  return spec;
}

scenarios::Observation obs_at(double v, double s) {
  scenarios::Observation obs;
  obs.velocity_mps = v;
  obs.displacement_m = s;
  return obs;
}

coach::PromptTemplate test_template() {
  return coach::PromptTemplate::from_strings(
      "Keep between {envelope_lower} and {envelope_upper} m/s.",
      "v={velocity} s={displacement} steer={steer} head={head}");
}

InferenceContext context_at(const scenarios::ScenarioSpec& spec,
                            const coach::PromptTemplate& tpl, std::int64_t time_ns,
                            double v, double s,
                            plant::SteerPos steer = plant::SteerPos::Center,
                            plant::HeadPos head = plant::HeadPos::Center) {
  auto bounds = scenarios::envelope_bounds(spec, s);
  coach::PromptInputs inputs;
  inputs.velocity_mps = v;
  inputs.displacement_m = s;
  inputs.steer = steer;
  inputs.head = head;
  inputs.envelope_lower = bounds.lower;
  inputs.envelope_upper = bounds.upper;
  InferenceContext ctx;
  ctx.tag = Tag{time_ns, 1};
  ctx.prompt = tpl.build(inputs);
  ctx.state = plant::CarState{v, s, steer, head};
  ctx.lane = spec.initial_lane;
  ctx.scenario = &spec;
  return ctx;
}

std::string temp_file(const std::string& name) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "coachsim_backend_tests";
  fs::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("latency model replays its sequence and then repeats the last value") {
  LatencyModel constant = LatencyModel::constant(50 * ms);
  CHECK(constant.next() == 50 * ms);
  CHECK(constant.next() == 50 * ms);

  LatencyModel seq = LatencyModel::sequence({300 * ms, 20 * ms, 40 * ms});
  CHECK(seq.next() == 300 * ms);
  CHECK(seq.next() == 20 * ms);
  CHECK(seq.next() == 40 * ms);
  CHECK(seq.next() == 40 * ms);
  CHECK(seq.next() == 40 * ms);

  CHECK_THROWS_AS(LatencyModel::sequence({}), ConfigError);
}

TEST_CASE("oracle grades speed deviations into fixed sentences") {
  scenarios::ScenarioSpec spec = speed_spec();
  // Mid-course desirable velocity: 18 + (11 - 18) * 0.5 = 14.5 m/s.
  const double s = 50.0;
  auto decide = [&](double v) { return OracleBackend::decide(spec, obs_at(v, s)); };

  CHECK(decide(14.5) == coach::CoachOutput{ControlSignal::NONE, ""});
  CHECK(decide(16.4) == coach::CoachOutput{ControlSignal::NONE, ""});
  CHECK(decide(17.0) ==
        coach::CoachOutput{ControlSignal::WARNING, "Ease off and slow down."});
  CHECK(decide(17.5) ==  // deviation 3.0, right at 1.5x the band
        coach::CoachOutput{ControlSignal::WARNING, "Ease off and slow down."});
  CHECK(decide(18.0) ==
        coach::CoachOutput{ControlSignal::WARNING, "Apply gentle braking now."});
  CHECK(decide(18.5) ==  // deviation 4.0, right at twice the band
        coach::CoachOutput{ControlSignal::WARNING, "Apply gentle braking now."});
  CHECK(decide(19.0) ==
        coach::CoachOutput{ControlSignal::ACTUATE, "Emergency braking now."});
  CHECK(decide(12.0) == coach::CoachOutput{ControlSignal::WARNING, "Speed up a little."});
  CHECK(decide(10.0) == coach::CoachOutput{ControlSignal::ACTUATE, "Speed up now."});
}

TEST_CASE("oracle puts lateral guidance ahead of speed on ties") {
  scenarios::ScenarioSpec spec = lane_spec();

  scenarios::Observation obs = obs_at(18.0, 50.0);
  obs.lane = plant::Lane::Left;
  obs.steer = plant::SteerPos::Right;
  obs.head_right_recent = false;
  CHECK(OracleBackend::decide(spec, obs) ==
        coach::CoachOutput{ControlSignal::WARNING, "Check your right mirror before merging."});

  obs.head_right_recent = true;
  CHECK(OracleBackend::decide(spec, obs) == coach::CoachOutput{ControlSignal::NONE, ""});

  // Same-severity speed violation loses the wording to the lateral rule.
  obs.head_right_recent = false;
  obs.velocity_mps = 20.5;
  CHECK(OracleBackend::decide(spec, obs) ==
        coach::CoachOutput{ControlSignal::WARNING, "Check your right mirror before merging."});

  // A harsher speed violation wins.
  obs.velocity_mps = 23.0;
  CHECK(OracleBackend::decide(spec, obs) ==
        coach::CoachOutput{ControlSignal::ACTUATE, "Emergency braking now."});

  // Still left of the course end: escalate the merge itself.
  scenarios::Observation late = obs_at(18.0, 100.0);
  late.lane = plant::Lane::Left;
  CHECK(OracleBackend::decide(spec, late) ==
        coach::CoachOutput{ControlSignal::ACTUATE, "Steer gently into the right lane."});
}

TEST_CASE("oracle remembers a head check for one second") {
  scenarios::ScenarioSpec spec = lane_spec();
  coach::PromptTemplate tpl = test_template();
  OracleBackend oracle;

  // Head turned right now: the merge advice stays quiet.
  auto r1 = oracle.complete(context_at(spec, tpl, 0, 18.0, 10.0, plant::SteerPos::Right,
                                       plant::HeadPos::Right));
  CHECK(r1.raw == "NONE|");
  CHECK(r1.latency_ns == 50 * ms);

  // 900 ms later the check still counts.
  auto r2 = oracle.complete(context_at(spec, tpl, 900 * ms, 18.0, 26.2,
                                       plant::SteerPos::Right, plant::HeadPos::Center));
  CHECK(r2.raw == "NONE|");

  // 1.1 s after the check it has gone stale.
  auto r3 = oracle.complete(context_at(spec, tpl, 1100 * ms, 18.0, 29.8,
                                       plant::SteerPos::Right, plant::HeadPos::Center));
  CHECK(r3.raw == "WARNING|Check your right mirror before merging.");

  OracleConfig cfg;
  cfg.latency = LatencyModel::sequence({10 * ms, 20 * ms});
  OracleBackend scripted_latency(std::move(cfg));
  auto c = context_at(spec, tpl, 0, 18.0, 10.0);
  CHECK(scripted_latency.complete(c).latency_ns == 10 * ms);
  CHECK(scripted_latency.complete(c).latency_ns == 20 * ms);
  CHECK(scripted_latency.complete(c).latency_ns == 20 * ms);
}

TEST_CASE("scripted backend consumes replies and repeats the last") {
  ScriptedBackend backend({{"NONE|", 10 * ms},
                           {"", 5 * ms, true, "boom"},
                           {"WARNING|Ease off.", 30 * ms}});
  scenarios::ScenarioSpec spec = speed_spec();
  coach::PromptTemplate tpl = test_template();
  auto ctx = context_at(spec, tpl, 0, 18.0, 0.0);

  auto r1 = backend.complete(ctx);
  CHECK(r1.status == CompletionResult::Status::Ok);
  CHECK(r1.raw == "NONE|");
  CHECK(r1.latency_ns == 10 * ms);

  auto r2 = backend.complete(ctx);
  CHECK(r2.status == CompletionResult::Status::TransportError);
  CHECK(r2.error == "boom");

  auto r3 = backend.complete(ctx);
  CHECK(r3.raw == "WARNING|Ease off.");
  auto r4 = backend.complete(ctx);
  CHECK(r4.raw == "WARNING|Ease off.");
  CHECK(backend.calls() == 4);

  CHECK_THROWS_AS(ScriptedBackend({}), ConfigError);
}

TEST_CASE("inference traces survive a write/read round trip") {
  std::vector<InferenceRecord> records = {
      {0x0123456789abcdefull, 50 * ms, "WARNING|Ease off and slow down."},
      {0xffffffffffffffffull, 251 * ms, ""},
      {0x1ull, 7'654'321, "line one\nline two\twith tab\\and backslash\rcr"},
  };
  std::string path = temp_file("round_trip.inference");
  write_inference_trace(path, records);
  CHECK(read_inference_trace(path) == records);

  std::ifstream in(path);
  std::string first_line;
  std::getline(in, first_line);
  CHECK(first_line == "0\t0123456789abcdef\t50000000\tWARNING|Ease off and slow down.");
  std::string second_line;
  std::getline(in, second_line);
  CHECK(second_line == "1\tffffffffffffffff\t251000000\t");
}

TEST_CASE("malformed inference traces are rejected with the line number") {
  auto write_and_read = [](const std::string& name, const std::string& body) {
    std::string path = temp_file(name);
    std::ofstream out(path);
    out << body;
    out.close();
    return path;
  };
  auto check_error = [&](const std::string& name, const std::string& body,
                         const std::string& expected) {
    std::string path = write_and_read(name, body);
    CHECK_THROWS_WITH_AS(read_inference_trace(path), doctest::Contains(expected.c_str()),
                         ConfigError);
  };

  CHECK_THROWS_WITH_AS(read_inference_trace(temp_file("missing.inference")),
                       doctest::Contains("cannot open inference trace"), ConfigError);
  check_error("bad_fields.inference", "0\tdeadbeefdeadbeef\t100\n", "expected 4 fields");
  check_error("bad_index.inference", "x\tdeadbeefdeadbeef\t100\traw\n", "bad index 'x'");
  check_error("wrong_index.inference", "1\tdeadbeefdeadbeef\t100\traw\n", "bad index '1'");
  check_error("short_digest.inference", "0\tdeadbeef\t100\traw\n", "bad digest length");
  check_error("bad_digest.inference", "0\tzzzzzzzzzzzzzzzz\t100\traw\n",
              "bad digest 'zzzzzzzzzzzzzzzz'");
  check_error("bad_latency.inference", "0\tdeadbeefdeadbeef\t10x\traw\n",
              "bad latency '10x'");
  check_error("negative_latency.inference", "0\tdeadbeefdeadbeef\t-5\traw\n",
              "bad latency '-5'");
  check_error("line_two.inference",
              "0\tdeadbeefdeadbeef\t100\traw\n0\tdeadbeefdeadbeef\t100\traw\n",
              "line 2: bad index '0'");
}

TEST_CASE("recording captures digests and pins transport failures past the deadline") {
  scenarios::ScenarioSpec spec = speed_spec();
  coach::PromptTemplate tpl = test_template();
  ScriptedBackend inner({{"WARNING|Ease off.", 40 * ms},
                         {"ignored", 5 * ms, true, "connect refused"}});
  RecordingBackend recorder(inner, 250 * ms);

  auto ctx = context_at(spec, tpl, 0, 18.0, 0.0);
  auto r1 = recorder.complete(ctx);
  CHECK(r1.status == CompletionResult::Status::Ok);
  CHECK(r1.raw == "WARNING|Ease off.");

  auto r2 = recorder.complete(ctx);
  CHECK(r2.status == CompletionResult::Status::TransportError);
  CHECK(r2.raw.empty());  // nothing usable arrived, nothing recorded
  CHECK(r2.latency_ns == 251 * ms);

  REQUIRE(recorder.records().size() == 2);
  CHECK(recorder.records()[0] ==
        InferenceRecord{coach::prompt_digest(ctx.prompt), 40 * ms, "WARNING|Ease off."});
  CHECK(recorder.records()[1] ==
        InferenceRecord{coach::prompt_digest(ctx.prompt), 251 * ms, ""});
}

TEST_CASE("replay serves the recording and flags divergence") {
  scenarios::ScenarioSpec spec = speed_spec();
  coach::PromptTemplate tpl = test_template();
  auto ctx = context_at(spec, tpl, 0, 18.0, 0.0);
  std::vector<InferenceRecord> records = {
      {coach::prompt_digest(ctx.prompt), 40 * ms, "WARNING|Ease off."},
      {coach::prompt_digest(ctx.prompt), 20 * ms, "NONE|"},
  };

  SUBCASE("faithful replay") {
    ReplayBackend replay(records);
    auto r1 = replay.complete(ctx);
    CHECK(r1.raw == "WARNING|Ease off.");
    CHECK(r1.latency_ns == 40 * ms);
    CHECK(r1.divergence.empty());
    auto r2 = replay.complete(ctx);
    CHECK(r2.raw == "NONE|");
    CHECK(replay.consumed() == 2);
    CHECK_THROWS_WITH_AS(replay.complete(ctx),
                         doctest::Contains("exhausted after 2 completions"), FatalError);
  }

  SUBCASE("diverging prompt is reported") {
    ReplayBackend replay(records);
    auto other = context_at(spec, tpl, 0, 17.0, 0.0);  // different velocity, new digest
    auto r = replay.complete(other);
    CHECK(r.raw == "WARNING|Ease off.");  // recorded answer still served
    CHECK(r.divergence ==
          "prompt digest mismatch at index 0: recorded " +
              coach::digest_hex(records[0].prompt_digest) + ", live " +
              coach::digest_hex(coach::prompt_digest(other.prompt)));
  }

  SUBCASE("strict replay faults on divergence") {
    ReplayBackend replay(records, true);
    auto other = context_at(spec, tpl, 0, 17.0, 0.0);
    CHECK_THROWS_WITH_AS(replay.complete(other),
                         doctest::Contains("prompt digest mismatch at index 0"), FatalError);
  }
}

namespace {

// Feeder + coach, as the full model wires them; returns the kernel trace of
// a short closed-loop run against the given backend.
std::string coach_trace(const scenarios::ScenarioSpec& spec,
                        const coach::PromptTemplate& tpl, AgentBackend& backend,
                        std::int64_t horizon_ms_total) {
  Kernel k;
  auto clock = k.add_reactor("clock");
  auto tick = k.add_timer(clock, "tick", 0, plant::kTickNs);
  auto feeder = k.add_reactor("feeder");
  auto car_out = k.add_port<plant::CarSignals>(feeder, "car_out", PortKind::Output);
  auto env_out = k.add_port<plant::EnvSignals>(feeder, "env_out", PortKind::Output);
  auto step = std::make_shared<int>(0);
  k.add_reaction(feeder, "publish", {tick}, {car_out, env_out},
                 [step, car_out, env_out](ReactionContext& ctx) {
                   double v = 18.0 - 0.1 * *step;
                   double s = 1.5 * *step;
                   ++*step;
                   ctx.set(car_out, Value(plant::CarSignals{
                                        v, plant::SteerPos::Center, plant::HeadPos::Center}));
                   ctx.set(env_out, Value(plant::EnvSignals{s, plant::Lane::Right}));
                 });
  coach::CoachConfig cfg;
  cfg.scenario = &spec;
  cfg.prompt = &tpl;
  cfg.backend = &backend;
  auto ports = coach::add_coach(k, cfg);
  k.connect(car_out, ports.car_in, 0);
  k.connect(env_out, ports.env_in, 0);
  k.finalize();
  k.run_until(horizon_ms_total * ms);
  return k.trace_text();
}

}  // namespace

TEST_CASE("a replayed run reproduces the recorded run's trace byte for byte") {
  scenarios::ScenarioSpec spec = speed_spec();
  coach::PromptTemplate tpl = test_template();

  ScriptedBackend inner({{"WARNING|Ease off and slow down.", 30 * ms},
                         {"not parseable", 10 * ms},
                         {"ACTUATE|Emergency braking now.", 170 * ms},
                         {"", 5 * ms, true, "connect refused"},
                         {"NONE|", 20 * ms}});
  RecordingBackend recorder(inner, 250 * ms);
  std::string live_trace = coach_trace(spec, tpl, recorder, 1500);

  std::string path = temp_file("equivalence.inference");
  write_inference_trace(path, recorder.records());

  ReplayBackend replay = ReplayBackend::from_file(path, true);
  std::string replayed_trace = coach_trace(spec, tpl, replay, 1500);

  CHECK(!live_trace.empty());
  CHECK(live_trace == replayed_trace);
  // The transport failure round-tripped as a deadline miss in both runs.
  CHECK(live_trace.find("deadline-miss") != std::string::npos);
}

TEST_CASE("live backend speaks the chat protocol") {
  httplib::Server server;
  nlohmann::json seen_body;
  server.Post("/api/chat", [&](const httplib::Request& req, httplib::Response& res) {
    seen_body = nlohmann::json::parse(req.body, nullptr, false);
    nlohmann::json reply = {
        {"message", {{"role", "assistant"}, {"content", "WARNING|Ease off and slow down."}}}};
    res.set_content(reply.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  scenarios::ScenarioSpec spec = speed_spec();
  coach::PromptTemplate tpl = test_template();
  auto ctx = context_at(spec, tpl, 0, 18.0, 0.0);

  LiveConfig cfg;
  cfg.endpoint = "http://127.0.0.1:" + std::to_string(port);
  cfg.model = "test-model";
  LiveBackend live(cfg);
  auto res = live.complete(ctx);

  server.stop();
  server_thread.join();

  CHECK(res.status == CompletionResult::Status::Ok);
  CHECK(res.raw == "WARNING|Ease off and slow down.");
  CHECK(res.latency_ns > 0);

  REQUIRE(!seen_body.is_discarded());
  CHECK(seen_body["model"] == "test-model");
  CHECK(seen_body["stream"] == false);
  CHECK(seen_body["options"]["num_predict"] == 30);
  CHECK(seen_body["options"]["temperature"] == 0.0);
  REQUIRE(seen_body["messages"].size() == 2);
  CHECK(seen_body["messages"][0]["role"] == "system");
  CHECK(seen_body["messages"][0]["content"] == ctx.prompt.system_text);
  CHECK(seen_body["messages"][1]["role"] == "user");
  CHECK(seen_body["messages"][1]["content"] == ctx.prompt.user_text);
}

TEST_CASE("live backend reports transport problems instead of guessing") {
  scenarios::ScenarioSpec spec = speed_spec();
  coach::PromptTemplate tpl = test_template();
  auto ctx = context_at(spec, tpl, 0, 18.0, 0.0);

  SUBCASE("http error status") {
    httplib::Server server;
    server.Post("/api/chat", [&](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("overloaded", "text/plain");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    LiveBackend live({"http://127.0.0.1:" + std::to_string(port), "m", 2000, 60000});
    auto res = live.complete(ctx);
    server.stop();
    server_thread.join();
    CHECK(res.status == CompletionResult::Status::TransportError);
    CHECK(res.error == "HTTP 500");
  }

  SUBCASE("malformed completion body") {
    httplib::Server server;
    server.Post("/api/chat", [&](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"unexpected\": true}", "application/json");
    });
    int port = server.bind_to_any_port("127.0.0.1");
    std::thread server_thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();
    LiveBackend live({"http://127.0.0.1:" + std::to_string(port), "m", 2000, 60000});
    auto res = live.complete(ctx);
    server.stop();
    server_thread.join();
    CHECK(res.status == CompletionResult::Status::TransportError);
    CHECK(res.error == "malformed completion response");
  }

  SUBCASE("nothing listening") {
    LiveBackend live({"http://127.0.0.1:9", "m", 200, 1000});
    auto res = live.complete(ctx);
    CHECK(res.status == CompletionResult::Status::TransportError);
    CHECK(res.error.find("request failed") == 0);
  }

  SUBCASE("config validation") {
    CHECK_THROWS_AS(LiveBackend({"", "m", 2000, 60000}), ConfigError);
    CHECK_THROWS_AS(LiveBackend({"http://x", "", 2000, 60000}), ConfigError);
  }
}

TEST_CASE("bench summarizes latencies and suggests the worst case") {
  scenarios::ScenarioSpec spec = speed_spec();
  coach::PromptTemplate tpl = test_template();

  SUBCASE("exact sample count and order statistics") {
    ScriptedBackend backend({{"NONE|", 30 * ms},
                             {"NONE|", 10 * ms},
                             {"NONE|", 50 * ms},
                             {"NONE|", 20 * ms},
                             {"NONE|", 40 * ms}});
    BenchReport report = bench_run(backend, spec, tpl, 5);
    CHECK(report.latencies_ns == std::vector<std::int64_t>{30 * ms, 10 * ms, 50 * ms,
                                                           20 * ms, 40 * ms});
    CHECK(report.failures == 0);
    CHECK(report.min_ns == 10 * ms);
    CHECK(report.median_ns == 30 * ms);
    CHECK(report.p95_ns == 50 * ms);
    CHECK(report.max_ns == 50 * ms);
    CHECK(report.suggested_deadline_ns == 50 * ms);
  }

  SUBCASE("even counts take the lower middle") {
    ScriptedBackend backend({{"NONE|", 30 * ms},
                             {"NONE|", 10 * ms},
                             {"NONE|", 50 * ms},
                             {"NONE|", 20 * ms},
                             {"NONE|", 40 * ms}});
    BenchReport report = bench_run(backend, spec, tpl, 7);  // last reply repeats
    REQUIRE(report.latencies_ns.size() == 7);
    CHECK(report.median_ns == 40 * ms);  // sorted: 10 20 30 40 40 40 50
    CHECK(report.p95_ns == 50 * ms);
    CHECK(report.max_ns == 50 * ms);
  }

  SUBCASE("failures are counted, not averaged in") {
    ScriptedBackend backend({{"NONE|", 30 * ms},
                             {"", 5 * ms, true, "boom"},
                             {"NONE|", 40 * ms}});
    BenchReport report = bench_run(backend, spec, tpl, 3);
    CHECK(report.failures == 1);
    CHECK(report.latencies_ns == std::vector<std::int64_t>{30 * ms, 40 * ms});
    CHECK(report.max_ns == 40 * ms);
  }

  SUBCASE("no successes means no suggestion") {
    ScriptedBackend backend({{"", 5 * ms, true, "boom"}});
    BenchReport report = bench_run(backend, spec, tpl, 3);
    CHECK(report.failures == 3);
    CHECK(report.latencies_ns.empty());
    CHECK(report.suggested_deadline_ns == 0);
  }

  CHECK_THROWS_AS(bench_run(*std::make_unique<ScriptedBackend>(
                                std::vector<ScriptedReply>{{"NONE|", 1 * ms}}),
                            spec, tpl, 0),
                  ConfigError);
}
