#include "profiler/aggregation.hpp"

#include <vector>

namespace profiler {

DimensionScores compute_dimensions(std::span<const FeatureScores> features) {
  if (features.empty()) throw InsufficientInputError("cannot aggregate zero responses");
  std::int64_t relevancy = 0, recency = 0, consistency = 0;
  for (const auto& f : features) {
    relevancy += f.terminology() + f.application();
    recency += f.terminology() + f.depth();
    consistency += f.rigor() + f.uncertainty();
  }
  const auto pairs = 2 * static_cast<std::int64_t>(features.size());
  return DimensionScores(Rational(relevancy, pairs), Rational(recency, pairs),
                         Rational(consistency, pairs));
}

DimensionScores compute_dimensions(std::span<const ScoredResponse> scored) {
  std::vector<FeatureScores> features;
  features.reserve(scored.size());
  for (const auto& r : scored) features.push_back(r.features);
  return compute_dimensions(features);
}

Rational final_score(const DimensionScores& d, const Weights& w) {
  return w.relevancy() * d.relevancy() + w.recency() * d.recency() +
         w.consistency() * d.consistency();
}

}  // namespace profiler
