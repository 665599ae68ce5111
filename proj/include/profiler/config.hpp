#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

#include "profiler/classification.hpp"
#include "profiler/core_model.hpp"
#include "profiler/preprocess.hpp"
#include "profiler/scoring.hpp"

namespace profiler {

struct SessionConfig {
  int max_questions = 5;
  std::map<std::string, int> max_questions_by_domain;
  ExpertiseLevel first_difficulty = ExpertiseLevel::Basic;
  std::uint64_t seed = 20250101;

  int max_questions_for(const std::string& domain) const;
};

/// Every tunable of the pipeline. Defaults reproduce the published rubric.
struct ProfilerConfig {
  Weights weights;
  ThresholdTable thresholds;
  EvidenceConfig evidence;
  ReliabilityThresholds reliability;
  SegmenterConfig segmenter;
  SessionConfig session;
};

/// Overlays the keys present in `doc` onto the defaults. Throws ConfigError.
ProfilerConfig parse_config(const nlohmann::json& doc);
ProfilerConfig load_config(const std::filesystem::path& path);

}  // namespace profiler
