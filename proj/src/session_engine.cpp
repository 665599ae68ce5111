#include "profiler/session_engine.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace profiler {
namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

const Question& next_question(const QuestionBank& bank, ExpertiseLevel level, const SessionState& s) {
  std::set<std::string> used;
  for (const auto& q : s.asked) used.insert(q.question_id);
  for (const auto& id : pool_order(bank, level, s.seed)) {
    if (!used.contains(id)) return *bank.find(id);
  }
  throw ConfigError("question pool '" + std::string(label(level)) + "' exhausted for domain '" +
                    bank.domain() + "'");
}

}  // namespace

QuestionBank::QuestionBank(std::string domain, std::vector<Question> questions)
    : domain_(std::move(domain)), questions_(std::move(questions)) {
  std::set<std::string> ids;
  for (auto& q : questions_) {
    if (q.question_id.empty()) throw ConfigError("question bank '" + domain_ + "': empty question id");
    if (!ids.insert(q.question_id).second) {
      throw ConfigError("question bank '" + domain_ + "': duplicate question id '" + q.question_id + "'");
    }
    if (q.domain.empty()) q.domain = domain_;
    pools_[static_cast<std::size_t>(ordinal(q.difficulty))].push_back(q);
  }
}

const std::vector<Question>& QuestionBank::pool(ExpertiseLevel level) const {
  return pools_[static_cast<std::size_t>(ordinal(level))];
}

const Question* QuestionBank::find(std::string_view question_id) const {
  for (const auto& q : questions_) {
    if (q.question_id == question_id) return &q;
  }
  return nullptr;
}

void QuestionBank::require_depth(int max_questions) const {
  for (ExpertiseLevel level : kAllLevels) {
    if (static_cast<int>(pool(level).size()) < max_questions) {
      throw ConfigError("question bank '" + domain_ + "' has " + std::to_string(pool(level).size()) +
                        " " + std::string(label(level)) + " questions; need at least " +
                        std::to_string(max_questions));
    }
  }
}

QuestionBank parse_question_bank(std::string_view json_text, const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, line_of_offset(json_text, e.byte), e.what());
  }
  try {
    const std::string domain = doc.at("domain").get<std::string>();
    std::vector<Question> questions;
    for (const auto& item : doc.at("questions")) {
      Question q;
      q.question_id = item.at("id").get<std::string>();
      q.domain = domain;
      q.difficulty = level_from_label(item.at("difficulty").get<std::string>());
      q.text = item.at("text").get<std::string>();
      questions.push_back(std::move(q));
    }
    return QuestionBank(domain, std::move(questions));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source_name, 0, e.what());
  } catch (const Error& e) {
    throw ParseError(source_name, 0, e.what());
  }
}

QuestionBank load_question_bank(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read question bank " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_question_bank(buf.str(), path.string());
}

std::map<std::string, QuestionBank> load_question_banks(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ConfigError("question bank directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::map<std::string, QuestionBank> banks;
  for (const auto& f : files) {
    QuestionBank b = load_question_bank(f);
    const std::string domain = b.domain();
    if (!banks.emplace(domain, std::move(b)).second) {
      throw ConfigError("two question banks for domain '" + domain + "'");
    }
  }
  return banks;
}

std::vector<std::string> pool_order(const QuestionBank& bank, ExpertiseLevel level, std::uint64_t seed) {
  std::vector<std::string> ids;
  for (const auto& q : bank.pool(level)) ids.push_back(q.question_id);
  std::sort(ids.begin(), ids.end());
  // mt19937_64 output is fixed by the standard; the index draw is done by hand
  // because uniform_int_distribution differs between standard libraries.
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(ordinal(level) + 1)));
  for (std::size_t i = ids.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(ids[i - 1], ids[j]);
  }
  return ids;
}

SessionState start_session(std::string session_id, const std::string& domain,
                           ExpertiseLevel self_evaluation, const QuestionBank& bank,
                           const SessionConfig& config) {
  if (bank.domain() != domain) {
    throw ConfigError("no question bank for domain '" + domain + "'");
  }
  if (bank.questions().empty()) throw ConfigError("question bank for '" + domain + "' is empty");
  const int max_questions = config.max_questions_for(domain);
  if (max_questions < 1) throw ConfigError("max_questions must be at least 1");
  bank.require_depth(max_questions);

  SessionState s;
  s.session_id = std::move(session_id);
  s.domain = domain;
  s.self_evaluation = self_evaluation;
  s.seed = config.seed;
  s.max_questions = max_questions;
  s.asked.push_back(next_question(bank, config.first_difficulty, s));
  return s;
}

SessionState submit_response(SessionState state, std::string_view text, const Pipeline& pipeline,
                             const QuestionBank& bank) {
  if (state.status == SessionStatus::Finished) {
    throw StateError("session '" + state.session_id + "' is finished");
  }
  const Question* outstanding = state.outstanding();
  if (outstanding == nullptr) {
    throw StateError("session '" + state.session_id + "' has no outstanding question");
  }
  const Question question = *outstanding;
  const std::string response_id =
      state.session_id + "-q" + std::to_string(state.scored.size() + 1);

  ScoredResponse scored;
  try {
    scored = pipeline.score(state.domain, question.text, response_id, text);
  } catch (const ScorerError& e) {
    if (state.outstanding_reasked()) throw;
    state.unscoreable.push_back({question.question_id, std::string(text), e.what()});
    return state;
  }

  state.scored.push_back(std::move(scored));
  const ExpertiseLevel estimate = pipeline.running_estimate(state.scored);
  state.estimate_history.push_back(EstimateEntry{static_cast<int>(state.scored.size()),
                                                 question.question_id, question.difficulty, estimate});
  if (static_cast<int>(state.scored.size()) >= state.max_questions) {
    state.status = SessionStatus::Finished;
  } else {
    state.asked.push_back(next_question(bank, estimate, state));
  }
  return state;
}

ProfileResult finalize(const SessionState& state, const Pipeline& pipeline) {
  if (state.status != SessionStatus::Finished) {
    throw StateError("session '" + state.session_id + "' is still active");
  }
  ProfileResult r = pipeline.profile(state.session_id, state.domain, state.scored, state.self_evaluation);
  r.estimate_history = state.estimate_history;
  return r;
}

}  // namespace profiler
