#include <doctest.h>

#include <cmath>

#include "profiler/classification.hpp"
#include "profiler/scoring.hpp"

using namespace profiler;

namespace {

// Independent grid oracle: half-up rounding of hundredths to tenths, then the published bands.
ExpertiseLevel oracle_level(int hundredths) {
  const int tenths = (hundredths + 5) / 10;
  if (tenths <= 7) return ExpertiseLevel::Novice;
  if (tenths <= 14) return ExpertiseLevel::Basic;
  if (tenths <= 22) return ExpertiseLevel::Advanced;
  return ExpertiseLevel::Expert;
}

ScoredResponse response(int t, int d, int a, int r, int u, const std::string& text,
                        Reliability flag = Reliability::Normal) {
  ScoredResponse s;
  s.response_id = "r";
  s.raw_text = text;
  s.features = FeatureScores(t, d, a, r, u);
  s.avg = average_features(s.features);
  s.adjusted_avg = s.avg;
  s.reliability_flag = flag;
  return s;
}

std::string words(int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += "word ";
  return out;
}

}  // namespace

TEST_CASE("classify examples") {
  CHECK(classify(Rational(0)) == ExpertiseLevel::Novice);
  CHECK(classify(Rational(23, 10)) == ExpertiseLevel::Expert);
  CHECK(classify(Rational(17, 8)) == ExpertiseLevel::Advanced);
  CHECK(classify(Rational(3)) == ExpertiseLevel::Expert);
  CHECK_THROWS_AS(classify(Rational(-1, 100)), ValidationError);
  CHECK_THROWS_AS(classify(Rational(301, 100)), ValidationError);
}

TEST_CASE("boundary points") {
  CHECK(classify(Rational::parse_decimal("0.7")) == ExpertiseLevel::Novice);
  CHECK(classify(Rational::parse_decimal("0.74")) == ExpertiseLevel::Novice);
  CHECK(classify(Rational::parse_decimal("0.75")) == ExpertiseLevel::Basic);
  CHECK(classify(Rational::parse_decimal("0.8")) == ExpertiseLevel::Basic);
  CHECK(classify(Rational::parse_decimal("1.4")) == ExpertiseLevel::Basic);
  CHECK(classify(Rational::parse_decimal("1.45")) == ExpertiseLevel::Advanced);
  CHECK(classify(Rational::parse_decimal("1.5")) == ExpertiseLevel::Advanced);
  CHECK(classify(Rational::parse_decimal("2.2")) == ExpertiseLevel::Advanced);
  CHECK(classify(Rational::parse_decimal("2.25")) == ExpertiseLevel::Expert);
  CHECK(classify(Rational::parse_decimal("2.3")) == ExpertiseLevel::Expert);
}

TEST_CASE("grid 0.00 to 3.00") {
  for (int h = 0; h <= 300; ++h) CHECK(classify(Rational(h, 100)) == oracle_level(h));
}

TEST_CASE("custom threshold table") {
  using L = ExpertiseLevel;
  const ThresholdTable t({ThresholdBand{L::Novice, 0, 9}, {L::Basic, 10, 19}, {L::Advanced, 20, 24},
                          {L::Expert, 25, 30}});
  CHECK(classify(Rational(1), t) == L::Basic);
  CHECK(classify(Rational(249, 100), t) == L::Expert);
  CHECK(classify(Rational(244, 100), t) == L::Advanced);
}

TEST_CASE("insufficient evidence gates") {
  const std::vector<ScoredResponse> one = {response(3, 3, 3, 3, 3, words(100))};
  CHECK(insufficient_evidence_gate(one) == EvidenceGate::TooFewResponses);

  std::vector<ScoredResponse> five;
  for (int i = 0; i < 5; ++i) five.push_back(response(2, 2, 2, 2, 2, words(60)));
  CHECK_FALSE(detect_insufficient_evidence(five));

  const std::vector<ScoredResponse> unreliable = {response(0, 0, 0, 0, 0, words(10), Reliability::Unreliable),
                                                  response(0, 0, 0, 0, 0, words(10), Reliability::Unreliable),
                                                  response(0, 0, 0, 0, 0, words(10), Reliability::Unreliable)};
  CHECK(insufficient_evidence_gate(unreliable) == EvidenceGate::AllUnreliable);

  const std::vector<ScoredResponse> short_answers = {response(2, 2, 2, 2, 2, words(9)),
                                                     response(2, 2, 2, 2, 2, words(10))};
  CHECK(insufficient_evidence_gate(short_answers) == EvidenceGate::TooFewWords);
  const std::vector<ScoredResponse> enough = {response(2, 2, 2, 2, 2, words(10)),
                                              response(2, 2, 2, 2, 2, words(10))};
  CHECK_FALSE(insufficient_evidence_gate(enough).has_value());

  // one reliable response is enough to pass the third gate
  auto mixed = unreliable;
  mixed[1].reliability_flag = Reliability::Normal;
  CHECK_FALSE(insufficient_evidence_gate(mixed).has_value());

  CHECK(insufficient_evidence_gate(std::vector<ScoredResponse>{}) == EvidenceGate::TooFewResponses);
}

TEST_CASE("confidence") {
  std::vector<ScoredResponse> same;
  for (int i = 0; i < 5; ++i) same.push_back(response(2, 1, 2, 2, 1, "x"));
  CHECK(compute_confidence(same) == doctest::Approx(1.0));

  const std::vector<ScoredResponse> one = {response(2, 1, 2, 2, 1, "x")};
  CHECK(compute_confidence(one) <= 0.2 + 1e-12);
  CHECK(compute_confidence(one) == doctest::Approx(0.2));

  // averages 0, 3, 0, 3, 0: mean 1.2, population variance 2.16
  std::vector<ScoredResponse> spread;
  for (int i = 0; i < 5; ++i) {
    spread.push_back(i % 2 ? response(3, 3, 3, 3, 3, "x") : response(0, 0, 0, 0, 0, "x"));
  }
  const double stddev = std::sqrt(2.16);
  CHECK(stddev == doctest::Approx(1.4697).epsilon(1e-4));
  CHECK(compute_confidence(spread) == doctest::Approx(1.0 - stddev / 1.5));
  CHECK(compute_confidence(spread) == doctest::Approx(0.02).epsilon(0.03));

  CHECK_THROWS_AS(compute_confidence(std::vector<ScoredResponse>{}), InsufficientInputError);
}

namespace {

ProfileResult classified(const std::vector<ScoredResponse>& scored, ExpertiseLevel level, Rational final) {
  ProfileResult r;
  r.participant_id = "p";
  r.domain = "security";
  r.per_response = scored;
  r.final_score = final;
  r.level = level;
  r.dimensions = DimensionScores(final, final, final);
  return r;
}

}  // namespace

TEST_CASE("justification") {
  // high terminology, weak depth
  const std::vector<ScoredResponse> adv = {response(3, 1, 2, 2, 3, "x"), response(3, 1, 2, 2, 3, "x")};
  const auto r = classified(adv, ExpertiseLevel::Advanced, Rational(2));
  const std::string text = build_justification(r);
  CHECK(text.find("Advanced Knowledge") != std::string::npos);
  CHECK(text.find("terminology") != std::string::npos);
  CHECK(text.find("small reasoning gaps") != std::string::npos);
  CHECK(build_justification(r) == text);

  const std::vector<ScoredResponse> top = {response(3, 3, 3, 3, 3, "x"), response(3, 3, 3, 3, 3, "x")};
  const std::string best = build_justification(classified(top, ExpertiseLevel::Expert, Rational(3)));
  CHECK(best.find("Expert") != std::string::npos);
  CHECK(best.find("No penalties or boosts were applied.") != std::string::npos);

  auto penalized = top;
  penalized[0].adjustment = Adjustment::Penalty;
  const std::string pen = build_justification(classified(penalized, ExpertiseLevel::Expert, Rational(3)));
  CHECK(pen.find("No penalties or boosts") == std::string::npos);
  CHECK(pen.find("Penalty applied") != std::string::npos);
}

TEST_CASE("gate descriptions name the gate") {
  CHECK(describe_evidence_gate(EvidenceGate::TooFewResponses).find("2") != std::string::npos);
  CHECK(describe_evidence_gate(EvidenceGate::TooFewWords).find("20") != std::string::npos);
  CHECK(describe_evidence_gate(EvidenceGate::AllUnreliable).find("unreliable") != std::string::npos);
}
