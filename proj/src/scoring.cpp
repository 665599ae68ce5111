#include "profiler/scoring.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace profiler {

namespace heuristic_markers {
const std::vector<std::string_view> kCausalConnectives = {"because", "therefore", "so that",
                                                         "leads to", "how", "why"};
const std::vector<std::string_view> kApplicationMarkers = {"for example", "in practice", "we used",
                                                          "such as", "in my work"};
// Evidence phrases and named standards.
const std::vector<std::string_view> kEvidenceMarkers = {
    "according to", "studies show", "iso", "nist", "gdpr", "owasp", "hipaa", "rfc", "pci dss", "ccpa"};
const std::vector<std::string_view> kHedges = {"i think", "maybe", "not sure", "probably", "i guess"};
}  // namespace heuristic_markers

namespace {

int capped(std::size_t n) { return static_cast<int>(std::min<std::size_t>(n, kMaxFeatureScore)); }

std::size_t count_markers(std::span<const Segment> segments, const std::vector<std::string_view>& markers) {
  std::size_t n = 0;
  for (const auto& s : segments) {
    for (auto m : markers) n += count_occurrences(s.text, m);
  }
  return n;
}

}  // namespace

Rational average_features(const FeatureScores& f) { return Rational(f.sum(), 5); }

AdjustedAverage apply_adjustment(const Rational& avg, bool penalty, bool boost) {
  if (penalty) return {max(Rational(0), avg - Rational(1)), Adjustment::Penalty};
  if (boost) return {min(Rational(3), avg + Rational(1, 2)), Adjustment::Boost};
  return {avg, Adjustment::None};
}

Reliability flag_reliability(const Rational& adjusted, const ReliabilityThresholds& t) {
  if (adjusted < t.unreliable_below) return Reliability::Unreliable;
  if (adjusted >= t.strongly_valid_at) return Reliability::StronglyValid;
  return Reliability::Normal;
}

BackendVerdict HeuristicScorer::score(const ScoringRequest& request) const {
  using namespace heuristic_markers;
  const auto& segments = request.segments;

  std::set<std::string> terms;
  bool known_error = false;
  bool gold_fact = false;
  std::size_t total_words = 0;
  for (const auto& s : segments) {
    terms.insert(s.term_hits.begin(), s.term_hits.end());
    for (const auto& f : s.fact_hits) {
      known_error |= f.kind == EntryKind::KnownError;
      gold_fact |= f.kind == EntryKind::GoldFact;
    }
    total_words += word_count(s.text);
  }

  const std::size_t connectives = count_markers(segments, kCausalConnectives);
  const std::size_t applications = count_markers(segments, kApplicationMarkers);
  const std::size_t evidence = count_markers(segments, kEvidenceMarkers);
  const std::size_t hedges = count_markers(segments, kHedges);

  int rigor = 0;
  if (segments.size() >= 2) ++rigor;
  if (evidence > 0) ++rigor;
  if (!segments.empty()) {
    // Mean words per segment in [8, 40], compared without division.
    const std::size_t n = segments.size();
    if (total_words >= 8 * n && total_words <= 40 * n) ++rigor;
  }

  BackendVerdict v;
  v.features = FeatureScores(capped(terms.size()), capped(connectives), capped(applications), rigor,
                             kMaxFeatureScore - capped(hedges));
  v.penalty = known_error;
  v.boost = gold_fact;
  v.backend = name();

  std::ostringstream why;
  why << "heuristic: " << terms.size() << " domain term(s), " << connectives
      << " causal connective(s), " << applications << " application marker(s), " << segments.size()
      << " segment(s), " << evidence << " evidence marker(s), " << hedges << " hedge(s)";
  if (known_error) why << "; matched a known factual error";
  if (gold_fact) why << "; matched a verified fact";
  v.rationale = why.str();
  return v;
}

FallbackScorer::FallbackScorer(std::shared_ptr<const ScorerBackend> primary,
                               std::shared_ptr<const ScorerBackend> fallback)
    : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

std::string FallbackScorer::name() const { return primary_->name() + "+" + fallback_->name(); }

BackendVerdict FallbackScorer::score(const ScoringRequest& request) const {
  try {
    return primary_->score(request);
  } catch (const ScorerError&) {
    return fallback_->score(request);
  }
}

ScoredResponse make_scored_response(std::string response_id, std::string raw_text,
                                    const std::vector<Segment>& segments,
                                    const BackendVerdict& verdict,
                                    const ReliabilityThresholds& thresholds) {
  ScoredResponse r;
  r.response_id = std::move(response_id);
  r.raw_text = std::move(raw_text);
  for (const auto& s : segments) r.normalized_segments.push_back(s.text);
  r.features = verdict.features;
  r.avg = average_features(verdict.features);
  const AdjustedAverage adjusted = apply_adjustment(r.avg, verdict.penalty, verdict.boost);
  r.adjustment = adjusted.adjustment;
  r.adjusted_avg = adjusted.value;
  r.reliability_flag = flag_reliability(r.adjusted_avg, thresholds);
  r.backend = verdict.backend;
  r.scorer_rationale = verdict.rationale;
  return r;
}

}  // namespace profiler
