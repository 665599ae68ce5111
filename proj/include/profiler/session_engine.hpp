#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "profiler/core_model.hpp"
#include "profiler/pipeline.hpp"

namespace profiler {

/// Questions for one domain, pooled by difficulty.
class QuestionBank {
 public:
  QuestionBank() = default;
  QuestionBank(std::string domain, std::vector<Question> questions);

  const std::string& domain() const { return domain_; }
  const std::vector<Question>& questions() const { return questions_; }
  const std::vector<Question>& pool(ExpertiseLevel level) const;
  const Question* find(std::string_view question_id) const;

  /// Throws ConfigError unless every level holds at least `max_questions` entries.
  void require_depth(int max_questions) const;

 private:
  std::string domain_;
  std::vector<Question> questions_;
  std::array<std::vector<Question>, 4> pools_;
};

/// {"domain", "questions": [{"id", "difficulty", "text"}]}
QuestionBank parse_question_bank(std::string_view json_text, const std::string& source_name);
QuestionBank load_question_bank(const std::filesystem::path& path);
/// All *.json banks in a directory, keyed by domain.
std::map<std::string, QuestionBank> load_question_banks(const std::filesystem::path& dir);

/// Order in which a session draws questions from `level`'s pool: a seeded
/// Fisher-Yates shuffle, so equal seeds give equal interviews.
std::vector<std::string> pool_order(const QuestionBank& bank, ExpertiseLevel level, std::uint64_t seed);

/// New active session with one question asked at the configured first difficulty.
/// Throws ConfigError if the bank is empty, belongs to another domain, or is too shallow.
SessionState start_session(std::string session_id, const std::string& domain,
                           ExpertiseLevel self_evaluation, const QuestionBank& bank,
                           const SessionConfig& config);

/// Scores the answer to the outstanding question, appends the running estimate,
/// and asks the next question at the estimated difficulty (or finishes).
///
/// If scoring fails the attempt is recorded and the same question stays
/// outstanding; a second failure on the same question throws the ScorerError.
/// Throws StateError on a finished session.
SessionState submit_response(SessionState state, std::string_view text, const Pipeline& pipeline,
                             const QuestionBank& bank);

/// Final profile over every scored response. Throws StateError while active.
ProfileResult finalize(const SessionState& state, const Pipeline& pipeline);

}  // namespace profiler
