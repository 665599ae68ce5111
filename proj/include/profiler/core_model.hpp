#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "profiler/errors.hpp"
#include "profiler/rational.hpp"

namespace profiler {

/// Ordered expertise scale. Ordinals are stable and used in level differences.
enum class ExpertiseLevel : std::uint8_t { Novice = 0, Basic = 1, Advanced = 2, Expert = 3 };

inline constexpr std::array<ExpertiseLevel, 4> kAllLevels = {
    ExpertiseLevel::Novice, ExpertiseLevel::Basic, ExpertiseLevel::Advanced, ExpertiseLevel::Expert};

constexpr int ordinal(ExpertiseLevel level) { return static_cast<int>(level); }

/// Throws ValidationError outside 0..3.
ExpertiseLevel level_from_ordinal(int ordinal);

/// "Novice", "Basic Knowledge", "Advanced Knowledge", "Expert".
std::string_view label(ExpertiseLevel level);

/// Case-insensitive; accepts "Basic"/"Advanced" as synonyms of the long labels.
ExpertiseLevel level_from_label(std::string_view text);

/// Rubric axes in fixed order.
enum class Feature : std::uint8_t { Terminology = 0, Depth, Application, Rigor, Uncertainty };

inline constexpr std::array<Feature, 5> kAllFeatures = {
    Feature::Terminology, Feature::Depth, Feature::Application, Feature::Rigor,
    Feature::Uncertainty};

std::string_view feature_name(Feature f);

inline constexpr int kMaxFeatureScore = 3;

/// Five per-response rubric scores, each an integer in [0, 3].
class FeatureScores {
 public:
  FeatureScores() = default;
  FeatureScores(int terminology, int depth, int application, int rigor, int uncertainty);

  int terminology() const { return values_[0]; }
  int depth() const { return values_[1]; }
  int application() const { return values_[2]; }
  int rigor() const { return values_[3]; }
  int uncertainty() const { return values_[4]; }

  int operator[](Feature f) const { return values_[static_cast<std::size_t>(f)]; }
  const std::array<int, 5>& values() const { return values_; }
  int sum() const;

  friend bool operator==(const FeatureScores&, const FeatureScores&) = default;

 private:
  std::array<int, 5> values_{};
};

enum class Adjustment : std::uint8_t { None, Penalty, Boost };
enum class Reliability : std::uint8_t { Normal, Unreliable, StronglyValid };

std::string_view to_string(Adjustment a);
std::string_view to_string(Reliability r);
Adjustment adjustment_from_string(std::string_view s);
Reliability reliability_from_string(std::string_view s);

struct ScoredResponse {
  std::string response_id;
  std::string raw_text;
  std::vector<std::string> normalized_segments;
  FeatureScores features;
  Rational avg;
  Adjustment adjustment = Adjustment::None;
  Rational adjusted_avg;
  Reliability reliability_flag = Reliability::Normal;
  std::string backend;
  std::string scorer_rationale;

  friend bool operator==(const ScoredResponse&, const ScoredResponse&) = default;
};

/// Relevancy, Recency, Consistency; each in [0, 3].
class DimensionScores {
 public:
  DimensionScores() = default;
  DimensionScores(Rational relevancy, Rational recency, Rational consistency);

  const Rational& relevancy() const { return relevancy_; }
  const Rational& recency() const { return recency_; }
  const Rational& consistency() const { return consistency_; }

  friend bool operator==(const DimensionScores&, const DimensionScores&) = default;

 private:
  Rational relevancy_;
  Rational recency_;
  Rational consistency_;
};

/// Dimension weights: non-negative and summing to exactly 1.
class Weights {
 public:
  Weights() = default;
  Weights(Rational relevancy, Rational recency, Rational consistency);

  const Rational& relevancy() const { return relevancy_; }
  const Rational& recency() const { return recency_; }
  const Rational& consistency() const { return consistency_; }

  friend bool operator==(const Weights&, const Weights&) = default;

 private:
  Rational relevancy_{1, 2};
  Rational recency_{3, 10};
  Rational consistency_{1, 5};
};

/// One level's closed range in tenths, e.g. Basic = [8, 14] for 0.8..1.4.
struct ThresholdBand {
  ExpertiseLevel level;
  int lower_tenths;
  int upper_tenths;

  friend bool operator==(const ThresholdBand&, const ThresholdBand&) = default;
};

/// Four contiguous bands covering 0.0..3.0 at one-decimal granularity.
class ThresholdTable {
 public:
  ThresholdTable();
  explicit ThresholdTable(std::array<ThresholdBand, 4> bands);

  const std::array<ThresholdBand, 4>& bands() const { return bands_; }
  const ThresholdBand& band(ExpertiseLevel level) const;

  friend bool operator==(const ThresholdTable&, const ThresholdTable&) = default;

 private:
  std::array<ThresholdBand, 4> bands_;
};

/// Which insufficient-evidence gate fired.
enum class EvidenceGate : std::uint8_t { TooFewResponses, TooFewWords, AllUnreliable };

std::string_view to_string(EvidenceGate g);
EvidenceGate evidence_gate_from_string(std::string_view s);

/// Running estimate recorded after each scored response of a live session.
struct EstimateEntry {
  int question_number = 0;  // 1-based
  std::string question_id;
  ExpertiseLevel asked_difficulty = ExpertiseLevel::Basic;
  ExpertiseLevel estimate = ExpertiseLevel::Novice;

  friend bool operator==(const EstimateEntry&, const EstimateEntry&) = default;
};

struct ProfileResult {
  std::string participant_id;
  std::string domain;
  Rational final_score;
  // Exactly one of level / evidence_gate is set.
  std::optional<ExpertiseLevel> level;
  std::optional<EvidenceGate> evidence_gate;
  double confidence = 0.0;
  DimensionScores dimensions;
  std::vector<ScoredResponse> per_response;
  std::string justification;
  std::optional<ExpertiseLevel> self_evaluation;
  Weights weights;
  ThresholdTable thresholds;
  // Present for results of live sessions only.
  std::optional<std::vector<EstimateEntry>> estimate_history;

  bool insufficient_evidence() const { return evidence_gate.has_value(); }

  friend bool operator==(const ProfileResult&, const ProfileResult&) = default;
};

struct Question {
  std::string question_id;
  std::string domain;
  ExpertiseLevel difficulty = ExpertiseLevel::Basic;
  std::string text;

  friend bool operator==(const Question&, const Question&) = default;
};

enum class SessionStatus : std::uint8_t { Active, Finished };

/// A failed scoring attempt; the question stays outstanding and is re-asked once.
struct UnscoreableAttempt {
  std::string question_id;
  std::string text;
  std::string error;

  friend bool operator==(const UnscoreableAttempt&, const UnscoreableAttempt&) = default;
};

struct SessionState {
  std::string session_id;
  std::string domain;
  ExpertiseLevel self_evaluation = ExpertiseLevel::Novice;
  std::uint64_t seed = 0;
  int max_questions = 5;
  std::vector<Question> asked;
  std::vector<ScoredResponse> scored;
  std::vector<EstimateEntry> estimate_history;
  std::vector<UnscoreableAttempt> unscoreable;
  SessionStatus status = SessionStatus::Active;

  /// The question awaiting an answer, if any.
  const Question* outstanding() const {
    return status == SessionStatus::Active && asked.size() > scored.size() ? &asked.back() : nullptr;
  }
  /// True if the outstanding question already had one failed scoring attempt.
  bool outstanding_reasked() const;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

/// Whitespace-separated token count.
std::size_t word_count(std::string_view text);

}  // namespace profiler
