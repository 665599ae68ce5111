#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "profiler/core_model.hpp"

namespace profiler {

struct SessionCreated {
  std::string session_id;
  std::string domain;
  ExpertiseLevel self_evaluation = ExpertiseLevel::Novice;
  std::uint64_t seed = 0;
  int max_questions = 0;
  Question first_question;
};
struct QuestionAsked {
  Question question;
};
struct ResponseScored {
  ScoredResponse response;
  EstimateEntry estimate;
};
struct ResponseUnscoreable {
  UnscoreableAttempt attempt;
};
struct SessionFinished {};

using SessionEvent =
    std::variant<SessionCreated, QuestionAsked, ResponseScored, ResponseUnscoreable, SessionFinished>;

/// Events that turn `before` into `after`, where `after` came from one
/// start_session or submit_response step. Pass nullopt for a new session.
std::vector<SessionEvent> diff_events(const std::optional<SessionState>& before, const SessionState& after);

/// Applies one event. Throws ValidationError on an event that does not fit the state.
SessionState apply_event(SessionState state, const SessionEvent& event);

/// Folds a full log from the creation event.
SessionState replay(const std::vector<SessionEvent>& events);

/// Lossless JSON record (scores as exact fractions).
nlohmann::json event_to_json(const SessionEvent& event);
SessionEvent event_from_json(const nlohmann::json& record);

nlohmann::json session_state_to_json(const SessionState& state);

/// One newline-delimited event file per session under `<root>/sessions`, and
/// result documents under `<root>/results`. Each append is flushed before
/// returning, so a killed process loses at most the step in flight.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  void append(const std::string& session_id, const std::vector<SessionEvent>& events);
  std::vector<SessionEvent> read_events(const std::string& session_id) const;
  std::optional<SessionState> load(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;
  /// Replays every session log. Unreadable logs are skipped and reported in `errors`.
  std::vector<SessionState> load_all(std::vector<std::string>* errors = nullptr) const;

  void save_result(const std::string& id, const std::string& document_text);
  std::optional<std::string> load_result(const std::string& id) const;

 private:
  std::filesystem::path session_path(const std::string& session_id) const;

  std::filesystem::path root_;
  mutable std::mutex file_mutex_;
};

}  // namespace profiler
