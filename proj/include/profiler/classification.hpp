#pragma once

#include <optional>
#include <span>
#include <string>

#include "profiler/core_model.hpp"

namespace profiler {

/// Rounds half-up to one decimal, then returns the band containing it.
/// Rounding closes the printed gaps (0.7-0.8, 1.4-1.5, 2.2-2.3).
ExpertiseLevel classify(const Rational& score, const ThresholdTable& table = {});

struct EvidenceConfig {
  std::size_t min_responses = 2;
  std::size_t min_words = 20;
  /// Response count at which the evidence part of confidence saturates.
  std::size_t target_responses = 5;
  /// Standard deviation of per-response averages that drives stability to zero.
  double stability_scale = 1.5;
};

/// First failing gate in order: too few responses, too few words, all unreliable.
std::optional<EvidenceGate> insufficient_evidence_gate(std::span<const ScoredResponse> scored,
                                                       const EvidenceConfig& config = {});

inline bool detect_insufficient_evidence(std::span<const ScoredResponse> scored,
                                         const EvidenceConfig& config = {}) {
  return insufficient_evidence_gate(scored, config).has_value();
}

/// min(1, n / target) * max(0, 1 - stddev(avg) / scale), with population stddev.
/// This is a heuristic, not a calibrated probability.
double compute_confidence(std::span<const ScoredResponse> scored, const EvidenceConfig& config = {});

/// Mean of each feature across responses.
std::array<Rational, 5> feature_means(std::span<const ScoredResponse> scored);

/// Deterministic explanation of a classified result.
std::string build_justification(const ProfileResult& result);

/// Explanation for an insufficient-evidence result.
std::string describe_evidence_gate(EvidenceGate gate, const EvidenceConfig& config = {});

}  // namespace profiler
