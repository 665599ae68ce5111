#pragma once

#include <span>

#include "profiler/core_model.hpp"

namespace profiler {

/// Cross-response means of feature pairs:
///   relevancy   = mean((terminology + application) / 2)
///   recency     = mean((terminology + depth) / 2)
///   consistency = mean((rigor + uncertainty) / 2)
/// Only raw feature scores enter; adjusted averages do not.
/// Throws InsufficientInputError on an empty list.
DimensionScores compute_dimensions(std::span<const FeatureScores> features);
DimensionScores compute_dimensions(std::span<const ScoredResponse> scored);

/// Weighted sum of the dimensions. Lies in [0, 3] since weights are convex.
Rational final_score(const DimensionScores& d, const Weights& w = {});

}  // namespace profiler
