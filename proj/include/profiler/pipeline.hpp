#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "profiler/config.hpp"
#include "profiler/llm_scorer.hpp"
#include "profiler/scoring.hpp"

namespace profiler {

/// Lexicons keyed by domain; unknown domains get an empty lexicon.
class LexiconSet {
 public:
  LexiconSet() = default;
  explicit LexiconSet(std::vector<Lexicon> lexicons);

  /// Loads every *.json file in `dir`. Throws ConfigError if `dir` is missing.
  static LexiconSet load_dir(const std::filesystem::path& dir);

  const Lexicon& get(const std::string& domain) const;
  std::vector<std::string> domains() const;

 private:
  std::map<std::string, Lexicon> by_domain_;
  Lexicon empty_;
};

enum class BackendKind { Heuristic, Llm, LlmWithHeuristicFallback };

BackendKind backend_kind_from_string(std::string_view s);
std::shared_ptr<const ScorerBackend> make_backend(BackendKind kind, const LlmEndpointConfig& llm = {});

/// Preprocess -> score -> aggregate -> classify, shared by batch and live modes.
class Pipeline {
 public:
  Pipeline(ProfilerConfig config, std::shared_ptr<const ScorerBackend> backend, LexiconSet lexicons);

  std::vector<Segment> preprocess(const std::string& domain, std::string_view text) const;

  /// Throws ScorerError if the backend fails.
  ScoredResponse score(const std::string& domain, std::string_view question, std::string response_id,
                       std::string_view text) const;

  /// Full aggregation, gating, classification, confidence and justification.
  ProfileResult profile(std::string participant_id, std::string domain,
                        std::vector<ScoredResponse> scored,
                        std::optional<ExpertiseLevel> self_evaluation) const;

  /// Level of the responses seen so far, ignoring the evidence gates.
  ExpertiseLevel running_estimate(std::span<const ScoredResponse> scored) const;

  const ProfilerConfig& config() const { return config_; }
  const ScorerBackend& backend() const { return *backend_; }
  const LexiconSet& lexicons() const { return lexicons_; }

 private:
  ProfilerConfig config_;
  std::shared_ptr<const ScorerBackend> backend_;
  LexiconSet lexicons_;
};

}  // namespace profiler
