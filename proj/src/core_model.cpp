#include "profiler/core_model.hpp"

#include <algorithm>
#include <cctype>

namespace profiler {
namespace {

std::string fold(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

const Rational kZero{0};
const Rational kThree{3};

void check_score_range(const Rational& v, std::string_view what) {
  if (v < kZero || v > kThree) {
    throw ValidationError(std::string(what) + " out of range [0,3]: " + v.to_exact_string());
  }
}

}  // namespace

ExpertiseLevel level_from_ordinal(int ordinal) {
  if (ordinal < 0 || ordinal > 3) {
    throw ValidationError("expertise ordinal out of range: " + std::to_string(ordinal));
  }
  return static_cast<ExpertiseLevel>(ordinal);
}

std::string_view label(ExpertiseLevel level) {
  switch (level) {
    case ExpertiseLevel::Novice: return "Novice";
    case ExpertiseLevel::Basic: return "Basic Knowledge";
    case ExpertiseLevel::Advanced: return "Advanced Knowledge";
    case ExpertiseLevel::Expert: return "Expert";
  }
  return "Novice";
}

ExpertiseLevel level_from_label(std::string_view text) {
  const std::string key = fold(text);
  if (key == "novice") return ExpertiseLevel::Novice;
  if (key == "basic" || key == "basic knowledge") return ExpertiseLevel::Basic;
  if (key == "advanced" || key == "advanced knowledge") return ExpertiseLevel::Advanced;
  if (key == "expert") return ExpertiseLevel::Expert;
  throw ValidationError("unknown expertise level '" + std::string(text) + "'");
}

std::string_view feature_name(Feature f) {
  switch (f) {
    case Feature::Terminology: return "terminology";
    case Feature::Depth: return "depth";
    case Feature::Application: return "application";
    case Feature::Rigor: return "rigor";
    case Feature::Uncertainty: return "uncertainty";
  }
  return "terminology";
}

FeatureScores::FeatureScores(int terminology, int depth, int application, int rigor,
                             int uncertainty)
    : values_{terminology, depth, application, rigor, uncertainty} {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < 0 || values_[i] > kMaxFeatureScore) {
      throw ValidationError(std::string(feature_name(kAllFeatures[i])) +
                            " score out of range [0,3]: " + std::to_string(values_[i]));
    }
  }
}

int FeatureScores::sum() const {
  int total = 0;
  for (int v : values_) total += v;
  return total;
}

std::string_view to_string(Adjustment a) {
  switch (a) {
    case Adjustment::None: return "none";
    case Adjustment::Penalty: return "penalty";
    case Adjustment::Boost: return "boost";
  }
  return "none";
}

std::string_view to_string(Reliability r) {
  switch (r) {
    case Reliability::Normal: return "normal";
    case Reliability::Unreliable: return "unreliable";
    case Reliability::StronglyValid: return "strongly_valid";
  }
  return "normal";
}

Adjustment adjustment_from_string(std::string_view s) {
  if (s == "none") return Adjustment::None;
  if (s == "penalty") return Adjustment::Penalty;
  if (s == "boost") return Adjustment::Boost;
  throw ValidationError("unknown adjustment '" + std::string(s) + "'");
}

Reliability reliability_from_string(std::string_view s) {
  if (s == "normal") return Reliability::Normal;
  if (s == "unreliable") return Reliability::Unreliable;
  if (s == "strongly_valid") return Reliability::StronglyValid;
  throw ValidationError("unknown reliability flag '" + std::string(s) + "'");
}

DimensionScores::DimensionScores(Rational relevancy, Rational recency, Rational consistency)
    : relevancy_(relevancy), recency_(recency), consistency_(consistency) {
  check_score_range(relevancy_, "relevancy");
  check_score_range(recency_, "recency");
  check_score_range(consistency_, "consistency");
}

Weights::Weights(Rational relevancy, Rational recency, Rational consistency)
    : relevancy_(relevancy), recency_(recency), consistency_(consistency) {
  if (relevancy_ < kZero || recency_ < kZero || consistency_ < kZero) {
    throw ConfigError("dimension weights must be non-negative");
  }
  if (relevancy_ + recency_ + consistency_ != Rational(1)) {
    throw ConfigError("dimension weights must sum to 1, got " +
                      (relevancy_ + recency_ + consistency_).to_exact_string());
  }
}

ThresholdTable::ThresholdTable()
    : bands_{{{ExpertiseLevel::Novice, 0, 7},
              {ExpertiseLevel::Basic, 8, 14},
              {ExpertiseLevel::Advanced, 15, 22},
              {ExpertiseLevel::Expert, 23, 30}}} {}

ThresholdTable::ThresholdTable(std::array<ThresholdBand, 4> bands) : bands_(bands) {
  int expected_lower = 0;
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    const auto& b = bands_[i];
    if (b.level != kAllLevels[i]) {
      throw ConfigError("threshold bands must be listed Novice, Basic, Advanced, Expert");
    }
    if (b.lower_tenths != expected_lower || b.upper_tenths < b.lower_tenths) {
      throw ConfigError("threshold bands must be contiguous at 0.1 granularity starting at 0.0");
    }
    expected_lower = b.upper_tenths + 1;
  }
  if (bands_.back().upper_tenths != 30) {
    throw ConfigError("threshold bands must end at 3.0");
  }
}

const ThresholdBand& ThresholdTable::band(ExpertiseLevel level) const {
  return bands_[static_cast<std::size_t>(ordinal(level))];
}

std::string_view to_string(EvidenceGate g) {
  switch (g) {
    case EvidenceGate::TooFewResponses: return "too_few_responses";
    case EvidenceGate::TooFewWords: return "too_few_words";
    case EvidenceGate::AllUnreliable: return "all_unreliable";
  }
  return "too_few_responses";
}

EvidenceGate evidence_gate_from_string(std::string_view s) {
  if (s == "too_few_responses") return EvidenceGate::TooFewResponses;
  if (s == "too_few_words") return EvidenceGate::TooFewWords;
  if (s == "all_unreliable") return EvidenceGate::AllUnreliable;
  throw ValidationError("unknown evidence gate '" + std::string(s) + "'");
}

bool SessionState::outstanding_reasked() const {
  const Question* q = outstanding();
  if (q == nullptr || unscoreable.empty()) return false;
  // Attempts recorded after the last scored response belong to the outstanding slot.
  return unscoreable.back().question_id == q->question_id;
}

std::size_t word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

}  // namespace profiler
