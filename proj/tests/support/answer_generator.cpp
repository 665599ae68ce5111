#include "answer_generator.hpp"

#include <stdexcept>

#include <json.hpp>

#include "profiler/scoring.hpp"

namespace profiler::testsupport {

namespace {

// Neutral words that match no marker and no shipped lexicon alias.
const std::vector<std::string> kFiller = {"the", "team", "checked", "each", "step", "with",
                                          "care", "and", "noted", "results", "later", "today"};

void pad(std::vector<std::string>& words, std::size_t target, std::size_t& cursor) {
  while (words.size() < target) words.push_back(kFiller[cursor++ % kFiller.size()]);
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

std::vector<std::string> isolated_terms(const Lexicon& lexicon) {
  std::vector<std::string> out;
  for (const auto& e : lexicon.entries()) {
    if (e.kind != EntryKind::Term) continue;
    bool isolated = true;
    for (const auto& other : lexicon.entries()) {
      if (&other == &e) continue;
      if (count_occurrences(other.canonical, e.canonical) > 0 ||
          count_occurrences(e.canonical, other.canonical) > 0) {
        isolated = false;
      }
    }
    if (isolated) out.push_back(e.canonical);
  }
  return out;
}

std::string plant_answer(const FeatureScores& f, const std::vector<std::string>& terms) {
  if (terms.size() < static_cast<std::size_t>(f.terminology())) {
    throw std::invalid_argument("plant_answer: not enough terms");
  }
  std::vector<std::string> body;
  for (int i = 0; i < f.terminology(); ++i) body.push_back(terms[static_cast<std::size_t>(i)]);
  for (int i = 0; i < f.depth(); ++i) body.push_back("because");
  for (int i = 0; i < f.application(); ++i) body.push_back("for example");
  for (int i = 0; i < kMaxFeatureScore - f.uncertainty(); ++i) body.push_back("maybe");

  // body entries may be multi-word; count real words
  std::vector<std::string> words;
  for (const auto& b : body) {
    std::size_t start = 0;
    while (start <= b.size()) {
      const auto sp = b.find(' ', start);
      words.push_back(b.substr(start, sp - start));
      if (sp == std::string::npos) break;
      start = sp + 1;
    }
  }

  std::size_t cursor = 0;
  switch (f.rigor()) {
    case 0: {
      // one long segment: mean words above 40
      pad(words, 45, cursor);
      return join(words) + ".";
    }
    case 1: {
      pad(words, 12, cursor);
      return join(words) + ".";
    }
    default: {
      if (f.rigor() == 3) {
        words.insert(words.begin(), {"according", "to", "guidance"});
      }
      pad(words, 12, cursor);
      std::vector<std::string> second;
      pad(second, 10, cursor);
      return join(words) + ". " + join(second) + ".";
    }
  }
}

std::string source_path(const std::string& relative) {
  return std::string(PROFILER_SOURCE_DIR) + "/" + relative;
}

Lexicon shipped_lexicon(const std::string& domain) {
  return load_lexicon(source_path("data/lexicons/" + domain + ".json"));
}

std::shared_ptr<const Pipeline> heuristic_pipeline(ProfilerConfig config) {
  return std::make_shared<const Pipeline>(std::move(config), std::make_shared<HeuristicScorer>(),
                                          LexiconSet::load_dir(source_path("data/lexicons")));
}

std::map<std::string, QuestionBank> shipped_banks() { return load_question_banks(source_path("data/banks")); }

FeatureScores steady_features(ExpertiseLevel level) {
  switch (level) {
    case ExpertiseLevel::Novice: return FeatureScores(0, 0, 0, 1, 3);
    case ExpertiseLevel::Basic: return FeatureScores(1, 1, 1, 1, 1);
    case ExpertiseLevel::Advanced: return FeatureScores(2, 2, 2, 2, 2);
    case ExpertiseLevel::Expert: return FeatureScores(3, 3, 3, 3, 3);
  }
  throw std::invalid_argument("level");
}

std::string transcript_json(const std::string& participant_id, const std::string& domain,
                            const std::string& self_label, const std::vector<FeatureScores>& answers,
                            const std::vector<std::string>& terms) {
  nlohmann::ordered_json doc;
  doc["participant_id"] = participant_id;
  doc["domains"] = {domain};
  doc["self_evaluations"] = {{domain, self_label}};
  doc["turns"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < answers.size(); ++i) {
    doc["turns"].push_back({{"question", "Question " + std::to_string(i + 1) + "?"},
                            {"answer", plant_answer(answers[i], terms)},
                            {"domain", domain}});
  }
  return doc.dump(2);
}

}  // namespace profiler::testsupport
