#include <doctest.h>

#include "profiler/config.hpp"

using namespace profiler;
using nlohmann::json;

TEST_CASE("empty config gives the defaults") {
  const ProfilerConfig c = parse_config(json::object());
  CHECK(c.weights == Weights{});
  CHECK(c.thresholds == ThresholdTable{});
  CHECK(c.evidence.min_responses == 2);
  CHECK(c.evidence.min_words == 20);
  CHECK(c.session.max_questions == 5);
  CHECK(c.session.first_difficulty == ExpertiseLevel::Basic);
}

TEST_CASE("overrides") {
  const ProfilerConfig c = parse_config(json::parse(R"({
    "weights": {"relevancy": "0.4", "recency": 0.4, "consistency": "0.2"},
    "thresholds": [{"level": "Novice", "min": 0, "max": 0.9}, {"level": "Basic", "min": 1.0, "max": 1.9},
                   {"level": "Advanced", "min": 2.0, "max": 2.4}, {"level": "Expert", "min": 2.5, "max": 3.0}],
    "evidence": {"min_responses": 3, "min_words": 50},
    "reliability": {"unreliable_below": "1"},
    "abbreviations": ["approx."],
    "session": {"max_questions": 7, "max_questions_by_domain": {"privacy": 4}, "first_difficulty": "Novice", "seed": 9}
  })"));
  CHECK(c.weights.recency() == Rational(2, 5));
  CHECK(c.thresholds.band(ExpertiseLevel::Expert).lower_tenths == 25);
  CHECK(c.evidence.min_responses == 3);
  CHECK(c.evidence.min_words == 50);
  CHECK(c.reliability.unreliable_below == Rational(1));
  CHECK(c.reliability.strongly_valid_at == Rational(5, 2));
  CHECK(c.segmenter.abbreviations == std::vector<std::string>{"approx."});
  CHECK(c.session.max_questions_for("security") == 7);
  CHECK(c.session.max_questions_for("privacy") == 4);
  CHECK(c.session.first_difficulty == ExpertiseLevel::Novice);
  CHECK(c.session.seed == 9);
}

TEST_CASE("invalid configs are rejected") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"weights": {"relevancy": 1, "recency": 1, "consistency": 1}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"weights": {"relevancy": 1}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"thresholds": [{"level": "Novice", "min": 0, "max": 0.75}]})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"session": {"max_questions": 0}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(
                      R"({"weights": {"relevancy": "0.3333333", "recency": "0.3333333", "consistency": "0.3333334"}})")),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
