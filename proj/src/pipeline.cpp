#include "profiler/pipeline.hpp"

#include <algorithm>

#include "profiler/aggregation.hpp"
#include "profiler/classification.hpp"

namespace profiler {

LexiconSet::LexiconSet(std::vector<Lexicon> lexicons) {
  for (auto& l : lexicons) {
    const std::string domain = l.domain();
    if (!by_domain_.emplace(domain, std::move(l)).second) {
      throw ConfigError("two lexicons for domain '" + domain + "'");
    }
  }
}

LexiconSet LexiconSet::load_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ConfigError("lexicon directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Lexicon> lexicons;
  for (const auto& f : files) lexicons.push_back(load_lexicon(f));
  return LexiconSet(std::move(lexicons));
}

const Lexicon& LexiconSet::get(const std::string& domain) const {
  auto it = by_domain_.find(domain);
  return it == by_domain_.end() ? empty_ : it->second;
}

std::vector<std::string> LexiconSet::domains() const {
  std::vector<std::string> out;
  for (const auto& [d, _] : by_domain_) out.push_back(d);
  return out;
}

BackendKind backend_kind_from_string(std::string_view s) {
  if (s == "heuristic") return BackendKind::Heuristic;
  if (s == "llm") return BackendKind::Llm;
  if (s == "llm-with-heuristic-fallback") return BackendKind::LlmWithHeuristicFallback;
  throw ConfigError("unknown scorer backend '" + std::string(s) +
                    "' (expected heuristic, llm, or llm-with-heuristic-fallback)");
}

std::shared_ptr<const ScorerBackend> make_backend(BackendKind kind, const LlmEndpointConfig& llm) {
  switch (kind) {
    case BackendKind::Heuristic:
      return std::make_shared<HeuristicScorer>();
    case BackendKind::Llm:
      return std::make_shared<LlmScorer>(llm);
    case BackendKind::LlmWithHeuristicFallback:
      return std::make_shared<FallbackScorer>(std::make_shared<LlmScorer>(llm),
                                              std::make_shared<HeuristicScorer>());
  }
  throw ConfigError("unknown scorer backend");
}

Pipeline::Pipeline(ProfilerConfig config, std::shared_ptr<const ScorerBackend> backend,
                   LexiconSet lexicons)
    : config_(std::move(config)), backend_(std::move(backend)), lexicons_(std::move(lexicons)) {
  if (!backend_) throw ConfigError("pipeline needs a scorer backend");
}

std::vector<Segment> Pipeline::preprocess(const std::string& domain, std::string_view text) const {
  const Lexicon& lexicon = lexicons_.get(domain);
  return annotate(segment(normalize(text, lexicon), config_.segmenter), lexicon);
}

ScoredResponse Pipeline::score(const std::string& domain, std::string_view question,
                               std::string response_id, std::string_view text) const {
  const auto segments = preprocess(domain, text);
  const ScoringRequest request{question, segments, domain, lexicons_.get(domain)};
  const BackendVerdict verdict = backend_->score(request);
  return make_scored_response(std::move(response_id), std::string(text), segments, verdict,
                              config_.reliability);
}

ProfileResult Pipeline::profile(std::string participant_id, std::string domain,
                                std::vector<ScoredResponse> scored,
                                std::optional<ExpertiseLevel> self_evaluation) const {
  ProfileResult r;
  r.participant_id = std::move(participant_id);
  r.domain = std::move(domain);
  r.self_evaluation = self_evaluation;
  r.weights = config_.weights;
  r.thresholds = config_.thresholds;
  r.per_response = std::move(scored);
  if (!r.per_response.empty()) {
    r.dimensions = compute_dimensions(std::span<const ScoredResponse>(r.per_response));
    r.final_score = final_score(r.dimensions, config_.weights);
  }
  r.evidence_gate = insufficient_evidence_gate(r.per_response, config_.evidence);
  if (r.evidence_gate) {
    r.confidence = 0.0;
    r.justification = describe_evidence_gate(*r.evidence_gate, config_.evidence);
    return r;
  }
  r.level = classify(r.final_score, config_.thresholds);
  r.confidence = compute_confidence(r.per_response, config_.evidence);
  r.justification = build_justification(r);
  return r;
}

ExpertiseLevel Pipeline::running_estimate(std::span<const ScoredResponse> scored) const {
  return classify(final_score(compute_dimensions(scored), config_.weights), config_.thresholds);
}

}  // namespace profiler
