#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "answer_generator.hpp"
#include "profiler/batch_runner.hpp"
#include "profiler/output.hpp"

using namespace profiler;
namespace fs = std::filesystem;

namespace {

const std::string kValid = R"({
  "participant_id": "p1",
  "domains": ["security", "privacy"],
  "self_evaluations": {"security": "Advanced", "privacy": "Novice"},
  "turns": [
    {"question": "What is phishing?", "answer": "A scam email.", "domain": "security"},
    {"question": "What is consent?", "answer": "Agreeing.", "domain": "privacy"}
  ]
})";

std::string with_pid(const std::string& pid) {
  auto j = nlohmann::json::parse(kValid);
  j["participant_id"] = pid;
  return j.dump();
}

}  // namespace

TEST_CASE("parse a valid transcript") {
  const Transcript t = parse_transcript(kValid, "p1.json");
  CHECK(t.participant_id == "p1");
  CHECK(t.domains == std::vector<std::string>{"security", "privacy"});
  CHECK(t.self_evaluations.at("security") == ExpertiseLevel::Advanced);
  CHECK(t.turns.size() == 2);
  CHECK(t.turns[1].domain == "privacy");
}

TEST_CASE("validation errors carry file and line") {
  auto expect_error = [](const std::string& text, std::size_t line) {
    try {
      parse_transcript(text, "f.json");
      FAIL("expected a ParseError");
    } catch (const ParseError& e) {
      CHECK(e.file() == "f.json");
      CHECK(e.line() == line);
    }
  };
  // turn domain not listed, reported at the turns key (line 5)
  auto bad_domain = std::string(kValid);
  bad_domain.replace(bad_domain.find("\"domain\": \"privacy\""), 19, "\"domain\": \"finance\"");
  expect_error(bad_domain, 5);
  // unknown level label, reported at self_evaluations (line 4)
  auto bad_level = std::string(kValid);
  bad_level.replace(bad_level.find("\"Novice\""), 8, "\"Guru\"");
  expect_error(bad_level, 4);
  // syntax error on line 3
  expect_error("{\n\"participant_id\": \"p\",\n\"domains\": [,]\n}", 3);

  CHECK_THROWS_AS(parse_transcript(R"({"participant_id":"p","domains":["a"],"turns":[]})", "x"), ParseError);
  CHECK_THROWS_AS(parse_transcript(R"({"participant_id":"","domains":["a"],"self_evaluations":{},"turns":[]})", "x"),
                  ParseError);
  CHECK_THROWS_AS(parse_transcript(R"({"participant_id":"p","domains":["a","a"],"self_evaluations":{},"turns":[]})",
                                   "x"),
                  ParseError);
}

TEST_CASE("corpus loading isolates bad files") {
  Corpus c = parse_corpus({{"a.json", with_pid("a")}, {"b.json", with_pid("b")}, {"c.json", with_pid("c")}});
  CHECK(c.transcripts.size() == 3);
  CHECK(c.rejections.empty());

  auto missing = nlohmann::json::parse(kValid);
  missing.erase("self_evaluations");
  c = parse_corpus({{"a.json", with_pid("a")}, {"bad.json", missing.dump()}, {"c.json", with_pid("c")}});
  CHECK(c.transcripts.size() == 2);
  REQUIRE(c.rejections.size() == 1);
  CHECK(c.rejections[0].file == "bad.json");
  CHECK(c.rejections[0].message.find("self_evaluations") != std::string::npos);

  c = parse_corpus({{"a.json", with_pid("dup")}, {"b.json", with_pid("dup")}, {"c.json", with_pid("c")}});
  CHECK(c.transcripts.size() == 1);
  REQUIRE(c.rejections.size() == 2);
  for (const auto& r : c.rejections) {
    CHECK(r.message.find("a.json") != std::string::npos);
    CHECK(r.message.find("b.json") != std::string::npos);
  }

  CHECK(parse_corpus({}).warnings.size() == 1);
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus"), ConfigError);
}

TEST_CASE("load_corpus reads json files in name order") {
  const fs::path dir = fs::temp_directory_path() / ("profiler-corpus-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  for (const char* pid : {"zed", "amy", "kim"}) std::ofstream(dir / (std::string(pid) + ".json")) << with_pid(pid);
  std::ofstream(dir / "notes.txt") << "ignored";
  const Corpus c = load_corpus(dir);
  fs::remove_all(dir);
  REQUIRE(c.transcripts.size() == 3);
  CHECK(c.transcripts[0].participant_id == "amy");
  CHECK(c.transcripts[2].participant_id == "zed");
}

TEST_CASE("profile_transcript") {
  const auto p = testsupport::heuristic_pipeline();
  const auto terms = testsupport::isolated_terms(p->lexicons().get("security"));

  auto expert = nlohmann::json::parse(testsupport::transcript_json(
      "e", "security", "Expert", std::vector<FeatureScores>(4, FeatureScores(3, 3, 3, 3, 3)), terms));
  expert["domains"].push_back("privacy");
  expert["turns"].push_back({{"question", "q"}, {"answer", "Consent matters."}, {"domain", "privacy"}});
  const Transcript t = parse_transcript(expert.dump(), "e.json");
  const auto results = profile_transcript(t, *p);
  REQUIRE(results.size() == 2);
  CHECK(results.at("security").level == ExpertiseLevel::Expert);
  CHECK(results.at("security").final_score == Rational(3));
  CHECK(results.at("security").per_response[0].response_id == "e-t1");
  CHECK(results.at("privacy").evidence_gate == EvidenceGate::TooFewResponses);
  // no self-evaluation for privacy was given
  CHECK_FALSE(results.at("privacy").self_evaluation.has_value());
}

TEST_CASE("batch runs are deterministic across runs and thread counts") {
  const auto p = testsupport::heuristic_pipeline();
  const auto terms = testsupport::isolated_terms(p->lexicons().get("privacy"));
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> s(0, 3);
  std::vector<Transcript> ts;
  for (int i = 0; i < 24; ++i) {
    std::vector<FeatureScores> answers;
    for (int k = 0; k < 4; ++k) answers.emplace_back(s(rng), s(rng), s(rng), s(rng), s(rng));
    ts.push_back(parse_transcript(testsupport::transcript_json("p" + std::to_string(i), "privacy", "Basic",
                                                               answers, terms),
                                  "x"));
  }
  auto collect = [&](unsigned threads) {
    std::vector<std::string> docs(ts.size());
    run_batch(ts, *p,
              [&](std::size_t i, const Transcript&, const std::map<std::string, ProfileResult>& r) {
                docs[i] = to_json_text(r.at("privacy"));
              },
              threads);
    return docs;
  };
  const auto once = collect(1);
  CHECK(collect(1) == once);
  CHECK(collect(4) == once);
}

namespace {

struct AlwaysFails final : ScorerBackend {
  std::string name() const override { return "down"; }
  BackendVerdict score(const ScoringRequest&) const override { throw TransportError("connection refused"); }
};

}  // namespace

TEST_CASE("scorer failures are reported per transcript") {
  const auto heuristic = testsupport::heuristic_pipeline();
  const Pipeline p(ProfilerConfig{}, std::make_shared<AlwaysFails>(), heuristic->lexicons());
  const std::vector<Transcript> ts = {parse_transcript(kValid, "a")};
  int sunk = 0;
  std::vector<std::string> errors;
  run_batch(ts, p, [&](auto, const auto&, const auto&) { ++sunk; }, 2,
            [&](std::size_t, const Transcript& t, const std::string& msg) { errors.push_back(t.participant_id + msg); });
  CHECK(sunk == 0);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("connection refused") != std::string::npos);
}
