#include "profiler/config.hpp"

#include <fstream>

namespace profiler {
namespace {

Rational rational_field(const nlohmann::json& v) {
  if (v.is_string()) return Rational::parse_decimal(v.get<std::string>());
  if (v.is_number()) return Rational::parse_decimal(v.dump());
  throw ConfigError("expected a decimal number, got " + v.dump());
}

Rational weight_field(const nlohmann::json& v) {
  const Rational r = rational_field(v);
  if (r.round_half_up(6) != r) throw ConfigError("weights may have at most six decimal places: " + v.dump());
  return r;
}

int tenths_field(const nlohmann::json& v) {
  const Rational r = rational_field(v) * Rational(10);
  if (r.den() != 1) throw ConfigError("threshold bounds must have one decimal place: " + v.dump());
  return static_cast<int>(r.num());
}

}  // namespace

int SessionConfig::max_questions_for(const std::string& domain) const {
  auto it = max_questions_by_domain.find(domain);
  return it == max_questions_by_domain.end() ? max_questions : it->second;
}

ProfilerConfig parse_config(const nlohmann::json& doc) {
  ProfilerConfig c;
  try {
    if (doc.contains("weights")) {
      const auto& w = doc.at("weights");
      c.weights = Weights(weight_field(w.at("relevancy")), weight_field(w.at("recency")),
                          weight_field(w.at("consistency")));
    }
    if (doc.contains("thresholds")) {
      const auto& t = doc.at("thresholds");
      if (!t.is_array() || t.size() != 4) throw ConfigError("thresholds must list four bands");
      std::array<ThresholdBand, 4> bands{};
      for (std::size_t i = 0; i < 4; ++i) {
        bands[i] = ThresholdBand{level_from_label(t[i].at("level").get<std::string>()),
                                 tenths_field(t[i].at("min")), tenths_field(t[i].at("max"))};
      }
      c.thresholds = ThresholdTable(bands);
    }
    if (doc.contains("evidence")) {
      const auto& e = doc.at("evidence");
      c.evidence.min_responses = e.value("min_responses", c.evidence.min_responses);
      c.evidence.min_words = e.value("min_words", c.evidence.min_words);
      c.evidence.target_responses = e.value("target_responses", c.evidence.target_responses);
      c.evidence.stability_scale = e.value("stability_scale", c.evidence.stability_scale);
      if (c.evidence.target_responses == 0 || c.evidence.stability_scale <= 0) {
        throw ConfigError("evidence.target_responses and evidence.stability_scale must be positive");
      }
    }
    if (doc.contains("reliability")) {
      const auto& r = doc.at("reliability");
      if (r.contains("unreliable_below")) c.reliability.unreliable_below = rational_field(r.at("unreliable_below"));
      if (r.contains("strongly_valid_at")) c.reliability.strongly_valid_at = rational_field(r.at("strongly_valid_at"));
      if (c.reliability.strongly_valid_at < c.reliability.unreliable_below) {
        throw ConfigError("reliability.strongly_valid_at must not be below unreliable_below");
      }
    }
    if (doc.contains("abbreviations")) {
      c.segmenter.abbreviations.clear();
      for (const auto& a : doc.at("abbreviations")) {
        c.segmenter.abbreviations.push_back(fold_text(a.get<std::string>()));
      }
    }
    if (doc.contains("session")) {
      const auto& s = doc.at("session");
      c.session.max_questions = s.value("max_questions", c.session.max_questions);
      if (s.contains("max_questions_by_domain")) {
        c.session.max_questions_by_domain = s.at("max_questions_by_domain").get<std::map<std::string, int>>();
      }
      if (s.contains("first_difficulty")) {
        c.session.first_difficulty = level_from_label(s.at("first_difficulty").get<std::string>());
      }
      c.session.seed = s.value("seed", c.session.seed);
      auto check = [](int n) {
        if (n < 1) throw ConfigError("max_questions must be at least 1");
      };
      check(c.session.max_questions);
      for (const auto& [_, n] : c.session.max_questions_by_domain) check(n);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

ProfilerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  try {
    return parse_config(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace profiler
