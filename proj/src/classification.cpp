#include "profiler/classification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace profiler {
namespace {

std::string tenths_text(int tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string_view strength_phrase(Feature f) {
  switch (f) {
    case Feature::Terminology: return "correctly applied domain-specific terminology";
    case Feature::Depth: return "linked ideas together and explained how and why things work";
    case Feature::Application: return "applied knowledge to real-life situations";
    case Feature::Rigor: return "gave structured, clear answers backed by evidence";
    case Feature::Uncertainty: return "answered with well-founded confidence";
  }
  return "";
}

std::string_view weakness_phrase(Feature f) {
  switch (f) {
    case Feature::Terminology: return "used little domain-specific vocabulary";
    case Feature::Depth: return "had small reasoning gaps";
    case Feature::Application: return "rarely connected ideas to practice";
    case Feature::Rigor: return "gave loosely structured answers with little evidence";
    case Feature::Uncertainty: return "hedged often or made unsupported claims";
  }
  return "";
}

}  // namespace

ExpertiseLevel classify(const Rational& score, const ThresholdTable& table) {
  if (score < Rational(0) || score > Rational(3)) {
    throw ValidationError("score outside [0, 3]: " + score.to_exact_string());
  }
  const Rational rounded = score.round_half_up(1);
  const Rational tenths_r = rounded * Rational(10);
  const auto tenths = tenths_r.num();  // den is 1 after rounding to one decimal
  for (const auto& band : table.bands()) {
    if (tenths >= band.lower_tenths && tenths <= band.upper_tenths) return band.level;
  }
  throw ValidationError("score outside threshold table: " + score.to_exact_string());
}

std::optional<EvidenceGate> insufficient_evidence_gate(std::span<const ScoredResponse> scored,
                                                       const EvidenceConfig& config) {
  if (scored.size() < config.min_responses) return EvidenceGate::TooFewResponses;
  std::size_t words = 0;
  for (const auto& r : scored) words += word_count(r.raw_text);
  if (words < config.min_words) return EvidenceGate::TooFewWords;
  const bool all_unreliable =
      !scored.empty() && std::all_of(scored.begin(), scored.end(), [](const ScoredResponse& r) {
        return r.reliability_flag == Reliability::Unreliable;
      });
  if (all_unreliable) return EvidenceGate::AllUnreliable;
  return std::nullopt;
}

double compute_confidence(std::span<const ScoredResponse> scored, const EvidenceConfig& config) {
  if (scored.empty()) throw InsufficientInputError("confidence needs at least one response");
  const double n = static_cast<double>(scored.size());
  const double evidence =
      std::min(1.0, n / static_cast<double>(std::max<std::size_t>(1, config.target_responses)));
  double mean = 0.0;
  for (const auto& r : scored) mean += r.avg.to_double();
  mean /= n;
  double var = 0.0;
  for (const auto& r : scored) {
    const double d = r.avg.to_double() - mean;
    var += d * d;
  }
  const double stddev = std::sqrt(var / n);
  const double stability = std::max(0.0, 1.0 - stddev / config.stability_scale);
  return std::clamp(evidence * stability, 0.0, 1.0);
}

std::array<Rational, 5> feature_means(std::span<const ScoredResponse> scored) {
  std::array<Rational, 5> means{};
  if (scored.empty()) return means;
  std::array<std::int64_t, 5> sums{};
  for (const auto& r : scored) {
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += r.features.values()[i];
  }
  for (std::size_t i = 0; i < sums.size(); ++i) {
    means[i] = Rational(sums[i], static_cast<std::int64_t>(scored.size()));
  }
  return means;
}

std::string build_justification(const ProfileResult& result) {
  if (!result.level) {
    throw ValidationError("justification requires a classified result");
  }
  const ExpertiseLevel level = *result.level;
  const auto& band = result.thresholds.band(level);
  const auto means = feature_means(result.per_response);

  std::size_t strongest = 0, weakest = 0;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] > means[strongest]) strongest = i;
    if (means[i] < means[weakest]) weakest = i;
  }

  std::ostringstream out;
  out << label(level) << ": final score " << result.final_score.to_fixed(2) << " rounds to "
      << result.final_score.round_half_up(1).to_fixed(1) << ", ";
  if (band.lower_tenths == 0) {
    out << "inside the " << label(level) << " band 0.0-" << tenths_text(band.upper_tenths) << ". ";
  } else {
    out << "at or above the " << tenths_text(band.lower_tenths) << " threshold for " << label(level)
        << " (band " << tenths_text(band.lower_tenths) << "-" << tenths_text(band.upper_tenths) << "). ";
  }

  const Feature strong_f = kAllFeatures[strongest];
  const Feature weak_f = kAllFeatures[weakest];
  if (means[strongest] == means[weakest]) {
    out << "The participant showed an even profile across all five features (mean "
        << means[strongest].to_fixed(2) << " each). ";
  } else {
    out << "The participant " << strength_phrase(strong_f) << " (" << feature_name(strong_f) << " "
        << means[strongest].to_fixed(2) << ") but " << weakness_phrase(weak_f) << " ("
        << feature_name(weak_f) << " " << means[weakest].to_fixed(2) << "). ";
  }

  out << "Dimensions: relevancy " << result.dimensions.relevancy().to_fixed(2) << ", recency "
      << result.dimensions.recency().to_fixed(2) << ", consistency "
      << result.dimensions.consistency().to_fixed(2) << " (weights "
      << result.weights.relevancy().to_fixed(2) << "/" << result.weights.recency().to_fixed(2) << "/"
      << result.weights.consistency().to_fixed(2) << "). ";

  std::vector<std::string> penalties, boosts;
  for (const auto& r : result.per_response) {
    if (r.adjustment == Adjustment::Penalty) penalties.push_back(r.response_id);
    if (r.adjustment == Adjustment::Boost) boosts.push_back(r.response_id);
  }
  auto list = [](const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? ", " : "") + ids[i];
    return s;
  };
  if (penalties.empty() && boosts.empty()) {
    out << "No penalties or boosts were applied.";
  } else {
    if (!penalties.empty()) {
      out << "Penalty applied for factual errors in " << penalties.size() << " response(s) ("
          << list(penalties) << "). ";
    }
    if (!boosts.empty()) {
      out << "Boost applied for verified facts in " << boosts.size() << " response(s) ("
          << list(boosts) << "). ";
    }
    out << "Adjustments affect reliability flags only, not the final score.";
  }
  return out.str();
}

std::string describe_evidence_gate(EvidenceGate gate, const EvidenceConfig& config) {
  switch (gate) {
    case EvidenceGate::TooFewResponses:
      return "Insufficient evidence: fewer than " + std::to_string(config.min_responses) +
             " responses were available, so no level was assigned.";
    case EvidenceGate::TooFewWords:
      return "Insufficient evidence: the responses contained fewer than " +
             std::to_string(config.min_words) + " words in total, so no level was assigned.";
    case EvidenceGate::AllUnreliable:
      return "Insufficient evidence: every response was flagged unreliable, so no level was assigned.";
  }
  return "Insufficient evidence.";
}

}  // namespace profiler
