#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "answer_generator.hpp"
#include "profiler/session_engine.hpp"
#include "profiler/session_log.hpp"

using namespace profiler;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("profiler-log-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct FlakyBackend final : ScorerBackend {
  std::string name() const override { return "flaky"; }
  BackendVerdict score(const ScoringRequest& request) const override {
    for (const auto& s : request.segments) {
      if (count_occurrences(s.text, "unscoreable")) throw UnscoreableResponseError("bad reply");
    }
    return HeuristicScorer().score(request);
  }
};

// Runs a session and returns every intermediate state plus the event log.
std::pair<std::vector<SessionState>, std::vector<SessionEvent>> run_logged(std::uint64_t seed) {
  const auto heuristic = testsupport::heuristic_pipeline();
  const Pipeline p(ProfilerConfig{}, std::make_shared<FlakyBackend>(), heuristic->lexicons());
  const auto banks = testsupport::shipped_banks();
  const auto& bank = banks.at("security");
  const auto terms = testsupport::isolated_terms(p.lexicons().get("security"));
  SessionConfig cfg;
  cfg.seed = seed;
  std::vector<SessionState> states{start_session("log" + std::to_string(seed), "security",
                                                 ExpertiseLevel::Advanced, bank, cfg)};
  std::vector<SessionEvent> events = diff_events(std::nullopt, states.back());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> score(0, 3);
  int step = 0;
  while (states.back().status == SessionStatus::Active) {
    const std::string text = (step++ == 1) ? std::string("unscoreable")
                                           : testsupport::plant_answer(
                                                 FeatureScores(score(rng), score(rng), score(rng), score(rng),
                                                               score(rng)),
                                                 terms);
    auto next = submit_response(states.back(), text, p, bank);
    auto delta = diff_events(states.back(), next);
    events.insert(events.end(), delta.begin(), delta.end());
    states.push_back(std::move(next));
  }
  return {states, events};
}

}  // namespace

TEST_CASE("replaying the event log reproduces every intermediate state") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto [states, events] = run_logged(seed);
    CHECK(replay(events) == states.back());
    // every prefix that ends on a step boundary replays to that step's state
    SessionState folded;
    std::size_t applied = 0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto delta = diff_events(i == 0 ? std::nullopt : std::optional<SessionState>(states[i - 1]), states[i]);
      for (const auto& e : delta) folded = apply_event(std::move(folded), e), ++applied;
      CHECK(folded == states[i]);
    }
    CHECK(applied == events.size());
  }
}

TEST_CASE("events survive a JSON round trip exactly") {
  const auto [states, events] = run_logged(3);
  std::vector<SessionEvent> parsed;
  for (const auto& e : events) {
    const auto j = event_to_json(e);
    parsed.push_back(event_from_json(nlohmann::json::parse(j.dump())));
    CHECK(event_to_json(parsed.back()) == j);
  }
  CHECK(replay(parsed) == states.back());
}

TEST_CASE("invalid event sequences are rejected") {
  const auto [states, events] = run_logged(2);
  CHECK_THROWS_AS(replay({}), ValidationError);
  std::vector<SessionEvent> no_create(events.begin() + 1, events.end());
  CHECK_THROWS_AS(replay(no_create), ValidationError);
  auto twice = events;
  twice.push_back(SessionFinished{});
  CHECK_THROWS_AS(replay(twice), ValidationError);
  CHECK_THROWS(event_from_json(nlohmann::json{{"type", "teleported"}}));
}

TEST_CASE("store appends, reloads and tolerates a torn final line") {
  TempDir dir;
  SessionStore store(dir.path);
  const auto [states, events] = run_logged(4);
  const std::string id = states.back().session_id;
  store.append(id, events);
  CHECK(store.load(id) == states.back());
  CHECK(store.session_ids() == std::vector<std::string>{id});

  // a crash mid-write leaves a partial record
  {
    std::ofstream out(dir.path / "sessions" / (id + ".ndjson"), std::ios::app);
    out << "{\"type\":\"response_sco";
  }
  CHECK(store.read_events(id).size() == events.size());
  CHECK(store.load(id) == states.back());

  CHECK_FALSE(store.load("missing").has_value());
  CHECK_THROWS(store.append("../escape", events));
  CHECK_THROWS(store.append("a.b", events));

  store.save_result(id, "{\"ok\":true}\n");
  CHECK(store.load_result(id) == std::optional<std::string>("{\"ok\":true}\n"));
  CHECK_FALSE(store.load_result("missing").has_value());
}

TEST_CASE("load_all skips corrupt logs and reports them") {
  TempDir dir;
  SessionStore store(dir.path);
  const auto [states, events] = run_logged(5);
  store.append(states.back().session_id, events);
  {
    std::ofstream out(dir.path / "sessions" / "broken.ndjson");
    out << "not json\n{\"type\":\"finished\"}\n";
  }
  std::vector<std::string> errors;
  const auto all = store.load_all(&errors);
  CHECK(all.size() == 1);
  CHECK(errors.size() == 1);
}

TEST_CASE("state JSON carries the full researcher view") {
  const auto [states, events] = run_logged(6);
  const auto j = session_state_to_json(states.back());
  CHECK(j.at("session_id") == states.back().session_id);
  CHECK(j.at("estimate_history").size() == states.back().estimate_history.size());
  CHECK(j.at("unscoreable").size() == 1);
}
