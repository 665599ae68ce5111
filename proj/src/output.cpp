#include "profiler/output.hpp"

#include <sstream>

#include "profiler/classification.hpp"
#include "profiler/embedded_schema.hpp"
#include "profiler/json_schema.hpp"

namespace profiler {
namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kInsufficient = "insufficient_evidence";

std::string score_text(const Rational& r) { return r.to_fixed(2); }

// Exact decimal when it fits in six places, never fewer than two.
std::string weight_text(const Rational& r) {
  for (int places = 2; places <= 6; ++places) {
    if (r.round_half_up(places) == r) return r.to_fixed(places);
  }
  return r.to_fixed(6);
}

std::string confidence_text(double c) {
  return Rational(static_cast<std::int64_t>(std::llround(c * 1e6)), 1000000).to_fixed(2);
}

std::string tenths_text(int tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

int parse_tenths(const std::string& s) {
  const Rational r = Rational::parse_decimal(s) * Rational(10);
  if (r.den() != 1) throw ValidationError("threshold bound '" + s + "' is not at 0.1 granularity");
  return static_cast<int>(r.num());
}

Rational score_from(const nlohmann::json& v) {
  if (!v.is_string()) throw ValidationError("score must be a decimal string");
  return Rational::parse_decimal(v.get<std::string>());
}

std::optional<ExpertiseLevel> optional_level(const nlohmann::json& v) {
  if (v.is_null()) return std::nullopt;
  return level_from_label(v.get<std::string>());
}

std::string_view dimension_phrase(int which) {
  switch (which) {
    case 0: return "relevancy (staying on topic and applying knowledge)";
    case 1: return "recency (current, well-connected knowledge)";
    default: return "consistency (structured, well-supported answers)";
  }
}

}  // namespace

nlohmann::ordered_json to_json_document(const ProfileResult& r) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["participant_id"] = r.participant_id;
  doc["domain"] = r.domain;
  doc["final_score"] = score_text(r.final_score);
  doc["level"] = r.level ? std::string(label(*r.level)) : std::string(kInsufficient);
  doc["evidence_gate"] = r.evidence_gate ? ojson(std::string(to_string(*r.evidence_gate))) : ojson(nullptr);
  doc["confidence"] = r.evidence_gate ? std::string("0.00") : confidence_text(r.confidence);
  doc["dimensions"] = ojson{{"relevancy", score_text(r.dimensions.relevancy())},
                            {"recency", score_text(r.dimensions.recency())},
                            {"consistency", score_text(r.dimensions.consistency())}};
  ojson responses = ojson::array();
  for (const auto& s : r.per_response) {
    ojson item;
    item["response_id"] = s.response_id;
    ojson features;
    for (Feature f : kAllFeatures) features[std::string(feature_name(f))] = s.features[f];
    item["features"] = std::move(features);
    item["avg"] = score_text(s.avg);
    item["adjustment"] = to_string(s.adjustment);
    item["adjusted_avg"] = score_text(s.adjusted_avg);
    item["reliability_flag"] = to_string(s.reliability_flag);
    item["backend"] = s.backend;
    item["rationale"] = s.scorer_rationale;
    responses.push_back(std::move(item));
  }
  doc["responses"] = std::move(responses);
  doc["justification"] = r.justification;
  doc["self_evaluation"] = r.self_evaluation ? ojson(std::string(label(*r.self_evaluation))) : ojson(nullptr);
  doc["weights"] = ojson{{"relevancy", weight_text(r.weights.relevancy())},
                         {"recency", weight_text(r.weights.recency())},
                         {"consistency", weight_text(r.weights.consistency())}};
  ojson bands = ojson::array();
  for (const auto& b : r.thresholds.bands()) {
    bands.push_back(ojson{{"level", std::string(label(b.level))},
                          {"min", tenths_text(b.lower_tenths)},
                          {"max", tenths_text(b.upper_tenths)}});
  }
  doc["thresholds"] = std::move(bands);
  if (r.estimate_history) {
    ojson history = ojson::array();
    for (const auto& e : *r.estimate_history) {
      history.push_back(ojson{{"question_number", e.question_number},
                              {"question_id", e.question_id},
                              {"asked_difficulty", std::string(label(e.asked_difficulty))},
                              {"estimate", std::string(label(e.estimate))}});
    }
    doc["estimate_history"] = std::move(history);
  } else {
    doc["estimate_history"] = nullptr;
  }
  return doc;
}

std::string to_json_text(const ProfileResult& result) { return to_json_document(result).dump(2) + "\n"; }

ProfileResult from_json_document(const nlohmann::json& doc) {
  try {
    if (doc.at("schema_version").get<std::string>() != kSchemaVersion) {
      throw ValidationError("unsupported schema_version " + doc.at("schema_version").dump());
    }
    ProfileResult r;
    r.participant_id = doc.at("participant_id").get<std::string>();
    r.domain = doc.at("domain").get<std::string>();
    r.final_score = score_from(doc.at("final_score"));
    const std::string level = doc.at("level").get<std::string>();
    if (level == kInsufficient) {
      if (doc.at("evidence_gate").is_null()) throw ValidationError("insufficient_evidence without a gate");
      r.evidence_gate = evidence_gate_from_string(doc.at("evidence_gate").get<std::string>());
    } else {
      if (!doc.at("evidence_gate").is_null()) throw ValidationError("a level and an evidence gate together");
      r.level = level_from_label(level);
    }
    r.confidence = Rational::parse_decimal(doc.at("confidence").get<std::string>()).to_double();
    const auto& d = doc.at("dimensions");
    r.dimensions = DimensionScores(score_from(d.at("relevancy")), score_from(d.at("recency")),
                                   score_from(d.at("consistency")));
    for (const auto& item : doc.at("responses")) {
      ScoredResponse s;
      s.response_id = item.at("response_id").get<std::string>();
      const auto& f = item.at("features");
      s.features = FeatureScores(f.at("terminology").get<int>(), f.at("depth").get<int>(),
                                 f.at("application").get<int>(), f.at("rigor").get<int>(),
                                 f.at("uncertainty").get<int>());
      s.avg = score_from(item.at("avg"));
      s.adjustment = adjustment_from_string(item.at("adjustment").get<std::string>());
      s.adjusted_avg = score_from(item.at("adjusted_avg"));
      s.reliability_flag = reliability_from_string(item.at("reliability_flag").get<std::string>());
      s.backend = item.at("backend").get<std::string>();
      s.scorer_rationale = item.at("rationale").get<std::string>();
      r.per_response.push_back(std::move(s));
    }
    r.justification = doc.at("justification").get<std::string>();
    r.self_evaluation = optional_level(doc.at("self_evaluation"));
    const auto& w = doc.at("weights");
    r.weights = Weights(Rational::parse_decimal(w.at("relevancy").get<std::string>()),
                        Rational::parse_decimal(w.at("recency").get<std::string>()),
                        Rational::parse_decimal(w.at("consistency").get<std::string>()));
    const auto& t = doc.at("thresholds");
    if (t.size() != 4) throw ValidationError("thresholds must have four bands");
    std::array<ThresholdBand, 4> bands{};
    for (std::size_t i = 0; i < 4; ++i) {
      bands[i] = ThresholdBand{level_from_label(t[i].at("level").get<std::string>()),
                               parse_tenths(t[i].at("min").get<std::string>()),
                               parse_tenths(t[i].at("max").get<std::string>())};
    }
    r.thresholds = ThresholdTable(bands);
    if (doc.contains("estimate_history") && !doc.at("estimate_history").is_null()) {
      std::vector<EstimateEntry> history;
      for (const auto& e : doc.at("estimate_history")) {
        history.push_back(EstimateEntry{e.at("question_number").get<int>(), e.at("question_id").get<std::string>(),
                                        level_from_label(e.at("asked_difficulty").get<std::string>()),
                                        level_from_label(e.at("estimate").get<std::string>())});
      }
      r.estimate_history = std::move(history);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed result document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("malformed result document: ") + e.what());
  } catch (const ConfigError& e) {
    throw ValidationError(std::string("malformed result document: ") + e.what());
  }
}

std::string to_report(const ProfileResult& r) {
  std::ostringstream out;
  out << "Expertise profile: " << r.participant_id << " (" << r.domain << ")\n\n";

  if (!r.level) {
    out << "No expertise level was assigned. ";
    switch (*r.evidence_gate) {
      case EvidenceGate::TooFewResponses:
        out << "There were too few answers (" << r.per_response.size()
            << ") to support a reliable classification.";
        break;
      case EvidenceGate::TooFewWords: {
        std::size_t words = 0;
        for (const auto& s : r.per_response) words += word_count(s.raw_text);
        out << "The answers were too short to support a reliable classification";
        if (words > 0) out << " (" << words << " words in total)";
        out << ".";
        break;
      }
      case EvidenceGate::AllUnreliable:
        out << "Every answer was flagged as unreliable, so the evidence could not support a classification.";
        break;
    }
    out << "\n\n" << r.justification << "\n";
    return out.str();
  }

  const std::array<const Rational*, 3> dims = {&r.dimensions.relevancy(), &r.dimensions.recency(),
                                               &r.dimensions.consistency()};
  int strongest = 0;
  for (int i = 1; i < 3; ++i) {
    if (*dims[static_cast<std::size_t>(i)] > *dims[static_cast<std::size_t>(strongest)]) strongest = i;
  }

  out << "Based on " << r.per_response.size() << " answer(s), " << label(*r.level)
      << " is an appropriate classification for this participant (final score "
      << score_text(r.final_score) << " of 3.00, confidence " << confidence_text(r.confidence) << ").";
  if (r.self_evaluation) {
    const int diff = ordinal(*r.level) - ordinal(*r.self_evaluation);
    out << " The participant rated themselves " << label(*r.self_evaluation);
    if (diff == 0) {
      out << ", which matches.";
    } else {
      out << "; the profile is " << std::abs(diff) << " level(s) " << (diff > 0 ? "higher" : "lower") << ".";
    }
  }
  out << "\n\n";

  out << "The strongest dimension was " << dimension_phrase(strongest) << ".\n";
  out << "  Relevancy   " << score_text(r.dimensions.relevancy()) << "  (weight "
      << weight_text(r.weights.relevancy()) << ")\n";
  out << "  Recency     " << score_text(r.dimensions.recency()) << "  (weight "
      << weight_text(r.weights.recency()) << ")\n";
  out << "  Consistency " << score_text(r.dimensions.consistency()) << "  (weight "
      << weight_text(r.weights.consistency()) << ")\n\n";

  std::size_t penalties = 0, boosts = 0, unreliable = 0;
  for (const auto& s : r.per_response) {
    penalties += s.adjustment == Adjustment::Penalty;
    boosts += s.adjustment == Adjustment::Boost;
    unreliable += s.reliability_flag == Reliability::Unreliable;
  }
  std::vector<std::string> notes;
  if (penalties == 0 && boosts == 0) {
    notes.emplace_back("No answers contained known factual errors or notably strong verified facts.");
  }
  if (penalties > 0) notes.push_back(std::to_string(penalties) + " answer(s) contained a known factual error.");
  if (boosts > 0) notes.push_back(std::to_string(boosts) + " answer(s) stated a verified fact.");
  if (unreliable > 0) notes.push_back(std::to_string(unreliable) + " answer(s) were flagged as unreliable.");
  for (std::size_t i = 0; i < notes.size(); ++i) out << (i ? " " : "") << notes[i];
  out << "\n\n" << r.justification << "\n";
  return out.str();
}

const nlohmann::json& profile_result_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(embedded::kProfileResultSchema);
  return schema;
}

const nlohmann::json& participant_response_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(embedded::kParticipantResponseSchema);
  return schema;
}

std::vector<std::string> validate_result_document(const nlohmann::json& doc) {
  return validate_against_schema(doc, profile_result_schema());
}

}  // namespace profiler
