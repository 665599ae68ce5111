#pragma once

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "profiler/core_model.hpp"
#include "profiler/preprocess.hpp"

namespace profiler {

/// (t + d + a + r + u) / 5, exact.
Rational average_features(const FeatureScores& f);

struct AdjustedAverage {
  Rational value;
  Adjustment adjustment = Adjustment::None;
};

/// Penalty subtracts 1 (floored at 0), boost adds 1/2 (capped at 3). Penalty wins if both are set.
AdjustedAverage apply_adjustment(const Rational& avg, bool penalty, bool boost);

struct ReliabilityThresholds {
  Rational unreliable_below{1, 2};
  Rational strongly_valid_at{5, 2};
};

Reliability flag_reliability(const Rational& adjusted, const ReliabilityThresholds& t = {});

/// What a scorer backend sees for one response.
struct ScoringRequest {
  std::string_view question;
  std::span<const Segment> segments;
  std::string_view domain;
  const Lexicon& lexicon;
};

struct BackendVerdict {
  FeatureScores features;
  bool penalty = false;
  bool boost = false;
  std::string rationale;
  std::string backend;
};

/// Produces rubric scores for a response. Implementations must not share
/// mutable state between concurrent score() calls.
class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  virtual std::string name() const = 0;
  /// Throws ScorerError (TransportError / UnscoreableResponseError) on failure.
  virtual BackendVerdict score(const ScoringRequest& request) const = 0;
  /// Cheap reachability probe used before starting live sessions.
  virtual bool available() const { return true; }
};

/// Deterministic marker-counting backend; needs no network.
class HeuristicScorer final : public ScorerBackend {
 public:
  std::string name() const override { return "heuristic"; }
  BackendVerdict score(const ScoringRequest& request) const override;
};

/// Tries `primary`; on any ScorerError falls back to `fallback`.
class FallbackScorer final : public ScorerBackend {
 public:
  FallbackScorer(std::shared_ptr<const ScorerBackend> primary,
                 std::shared_ptr<const ScorerBackend> fallback);
  std::string name() const override;
  BackendVerdict score(const ScoringRequest& request) const override;
  bool available() const override { return true; }

 private:
  std::shared_ptr<const ScorerBackend> primary_;
  std::shared_ptr<const ScorerBackend> fallback_;
};

/// Preprocessed response plus verdict, with average, adjustment and flag filled in.
ScoredResponse make_scored_response(std::string response_id, std::string raw_text,
                                    const std::vector<Segment>& segments,
                                    const BackendVerdict& verdict,
                                    const ReliabilityThresholds& thresholds = {});

namespace heuristic_markers {
extern const std::vector<std::string_view> kCausalConnectives;
extern const std::vector<std::string_view> kApplicationMarkers;
extern const std::vector<std::string_view> kEvidenceMarkers;
extern const std::vector<std::string_view> kHedges;
}  // namespace heuristic_markers

}  // namespace profiler
