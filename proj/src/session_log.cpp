#include "profiler/session_log.hpp"

#include <fstream>
#include <sstream>

namespace profiler {
namespace {

using json = nlohmann::json;

json question_json(const Question& q) {
  return {{"id", q.question_id}, {"domain", q.domain},
          {"difficulty", std::string(label(q.difficulty))}, {"text", q.text}};
}

Question question_from(const json& j) {
  return Question{j.at("id").get<std::string>(), j.at("domain").get<std::string>(),
                  level_from_label(j.at("difficulty").get<std::string>()), j.at("text").get<std::string>()};
}

json response_json(const ScoredResponse& r) {
  const auto& f = r.features;
  return {{"response_id", r.response_id},
          {"raw_text", r.raw_text},
          {"normalized_segments", r.normalized_segments},
          {"features", json::array({f.terminology(), f.depth(), f.application(), f.rigor(), f.uncertainty()})},
          {"avg", r.avg.to_exact_string()},
          {"adjustment", std::string(to_string(r.adjustment))},
          {"adjusted_avg", r.adjusted_avg.to_exact_string()},
          {"reliability_flag", std::string(to_string(r.reliability_flag))},
          {"backend", r.backend},
          {"rationale", r.scorer_rationale}};
}

ScoredResponse response_from(const json& j) {
  ScoredResponse r;
  r.response_id = j.at("response_id").get<std::string>();
  r.raw_text = j.at("raw_text").get<std::string>();
  r.normalized_segments = j.at("normalized_segments").get<std::vector<std::string>>();
  const auto f = j.at("features").get<std::vector<int>>();
  if (f.size() != 5) throw ValidationError("features must have five entries");
  r.features = FeatureScores(f[0], f[1], f[2], f[3], f[4]);
  r.avg = Rational::parse_exact(j.at("avg").get<std::string>());
  r.adjustment = adjustment_from_string(j.at("adjustment").get<std::string>());
  r.adjusted_avg = Rational::parse_exact(j.at("adjusted_avg").get<std::string>());
  r.reliability_flag = reliability_from_string(j.at("reliability_flag").get<std::string>());
  r.backend = j.at("backend").get<std::string>();
  r.scorer_rationale = j.at("rationale").get<std::string>();
  return r;
}

json estimate_json(const EstimateEntry& e) {
  return {{"question_number", e.question_number},
          {"question_id", e.question_id},
          {"asked_difficulty", std::string(label(e.asked_difficulty))},
          {"estimate", std::string(label(e.estimate))}};
}

EstimateEntry estimate_from(const json& j) {
  return EstimateEntry{j.at("question_number").get<int>(), j.at("question_id").get<std::string>(),
                       level_from_label(j.at("asked_difficulty").get<std::string>()),
                       level_from_label(j.at("estimate").get<std::string>())};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::vector<SessionEvent> diff_events(const std::optional<SessionState>& before, const SessionState& after) {
  std::vector<SessionEvent> events;
  std::size_t asked_from = 0;
  if (!before) {
    if (after.asked.empty()) throw ValidationError("new session has no first question");
    events.push_back(SessionCreated{after.session_id, after.domain, after.self_evaluation, after.seed,
                                    after.max_questions, after.asked.front()});
    asked_from = 1;
    SessionState base = replay(events);
    if (!(base == after)) {
      // A fresh session is fully described by its creation event; anything else is a bug upstream.
      throw ValidationError("new session state is not a creation state");
    }
    return events;
  }
  asked_from = before->asked.size();
  for (std::size_t i = before->unscoreable.size(); i < after.unscoreable.size(); ++i) {
    events.push_back(ResponseUnscoreable{after.unscoreable[i]});
  }
  for (std::size_t i = before->scored.size(); i < after.scored.size(); ++i) {
    events.push_back(ResponseScored{after.scored[i], after.estimate_history.at(i)});
  }
  for (std::size_t i = asked_from; i < after.asked.size(); ++i) {
    events.push_back(QuestionAsked{after.asked[i]});
  }
  if (before->status != SessionStatus::Finished && after.status == SessionStatus::Finished) {
    events.push_back(SessionFinished{});
  }
  return events;
}

SessionState apply_event(SessionState s, const SessionEvent& event) {
  if (!std::holds_alternative<SessionCreated>(event)) {
    if (s.session_id.empty()) throw ValidationError("event before session creation");
    if (s.status == SessionStatus::Finished) throw ValidationError("event after session finished");
  }
  std::visit(overloaded{
                 [&](const SessionCreated& e) {
                   if (!s.session_id.empty()) throw ValidationError("duplicate creation event");
                   s.session_id = e.session_id;
                   s.domain = e.domain;
                   s.self_evaluation = e.self_evaluation;
                   s.seed = e.seed;
                   s.max_questions = e.max_questions;
                   s.asked = {e.first_question};
                 },
                 [&](const QuestionAsked& e) { s.asked.push_back(e.question); },
                 [&](const ResponseScored& e) {
                   if (s.scored.size() >= s.asked.size()) throw ValidationError("response without question");
                   s.scored.push_back(e.response);
                   s.estimate_history.push_back(e.estimate);
                 },
                 [&](const ResponseUnscoreable& e) { s.unscoreable.push_back(e.attempt); },
                 [&](const SessionFinished&) { s.status = SessionStatus::Finished; },
             },
             event);
  return s;
}

SessionState replay(const std::vector<SessionEvent>& events) {
  if (events.empty() || !std::holds_alternative<SessionCreated>(events.front())) {
    throw ValidationError("session log must start with a creation event");
  }
  SessionState s;
  for (const auto& e : events) s = apply_event(std::move(s), e);
  return s;
}

nlohmann::json event_to_json(const SessionEvent& event) {
  return std::visit(
      overloaded{
          [](const SessionCreated& e) -> json {
            return {{"event", "created"},
                    {"session_id", e.session_id},
                    {"domain", e.domain},
                    {"self_evaluation", std::string(label(e.self_evaluation))},
                    {"seed", e.seed},
                    {"max_questions", e.max_questions},
                    {"first_question", question_json(e.first_question)}};
          },
          [](const QuestionAsked& e) -> json {
            return {{"event", "question_asked"}, {"question", question_json(e.question)}};
          },
          [](const ResponseScored& e) -> json {
            return {{"event", "response_scored"},
                    {"response", response_json(e.response)},
                    {"estimate", estimate_json(e.estimate)}};
          },
          [](const ResponseUnscoreable& e) -> json {
            return {{"event", "response_unscoreable"},
                    {"question_id", e.attempt.question_id},
                    {"text", e.attempt.text},
                    {"error", e.attempt.error}};
          },
          [](const SessionFinished&) -> json { return {{"event", "finished"}}; },
      },
      event);
}

SessionEvent event_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("event").get<std::string>();
  if (kind == "created") {
    return SessionCreated{j.at("session_id").get<std::string>(), j.at("domain").get<std::string>(),
                          level_from_label(j.at("self_evaluation").get<std::string>()),
                          j.at("seed").get<std::uint64_t>(), j.at("max_questions").get<int>(),
                          question_from(j.at("first_question"))};
  }
  if (kind == "question_asked") return QuestionAsked{question_from(j.at("question"))};
  if (kind == "response_scored") {
    return ResponseScored{response_from(j.at("response")), estimate_from(j.at("estimate"))};
  }
  if (kind == "response_unscoreable") {
    return ResponseUnscoreable{{j.at("question_id").get<std::string>(), j.at("text").get<std::string>(),
                                j.at("error").get<std::string>()}};
  }
  if (kind == "finished") return SessionFinished{};
  throw ValidationError("unknown session event '" + kind + "'");
}

nlohmann::json session_state_to_json(const SessionState& s) {
  json asked = json::array();
  for (const auto& q : s.asked) asked.push_back(question_json(q));
  json scored = json::array();
  for (const auto& r : s.scored) scored.push_back(response_json(r));
  json history = json::array();
  for (const auto& e : s.estimate_history) history.push_back(estimate_json(e));
  json failed = json::array();
  for (const auto& u : s.unscoreable) {
    failed.push_back({{"question_id", u.question_id}, {"text", u.text}, {"error", u.error}});
  }
  return {{"session_id", s.session_id},
          {"domain", s.domain},
          {"self_evaluation", std::string(label(s.self_evaluation))},
          {"seed", s.seed},
          {"max_questions", s.max_questions},
          {"status", s.status == SessionStatus::Active ? "active" : "finished"},
          {"asked", asked},
          {"scored", scored},
          {"estimate_history", history},
          {"unscoreable", failed}};
}

SessionStore::SessionStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_ / "sessions");
  std::filesystem::create_directories(root_ / "results");
}

std::filesystem::path SessionStore::session_path(const std::string& session_id) const {
  if (session_id.empty() || session_id.find_first_of("/\\.") != std::string::npos) {
    throw ValidationError("invalid session id '" + session_id + "'");
  }
  return root_ / "sessions" / (session_id + ".ndjson");
}

void SessionStore::append(const std::string& session_id, const std::vector<SessionEvent>& events) {
  std::lock_guard lock(file_mutex_);
  std::ofstream out(session_path(session_id), std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open session log for " + session_id);
  for (const auto& e : events) out << event_to_json(e).dump() << '\n';
  out.flush();
  if (!out) throw Error("failed writing session log for " + session_id);
}

std::vector<SessionEvent> SessionStore::read_events(const std::string& session_id) const {
  std::lock_guard lock(file_mutex_);
  std::ifstream in(session_path(session_id), std::ios::binary);
  if (!in) return {};
  std::vector<SessionEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      events.push_back(event_from_json(json::parse(line)));
    } catch (const json::parse_error&) {
      // A torn final line from a crash mid-write is dropped; anything earlier is corruption.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw ParseError(session_path(session_id).string(), line_no, "corrupt session event");
    }
  }
  return events;
}

std::optional<SessionState> SessionStore::load(const std::string& session_id) const {
  const auto events = read_events(session_id);
  if (events.empty()) return std::nullopt;
  return replay(events);
}

std::vector<std::string> SessionStore::session_ids() const {
  std::vector<std::string> ids;
  for (const auto& e : std::filesystem::directory_iterator(root_ / "sessions")) {
    if (e.path().extension() == ".ndjson") ids.push_back(e.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<SessionState> SessionStore::load_all(std::vector<std::string>* errors) const {
  std::vector<SessionState> out;
  for (const auto& id : session_ids()) {
    try {
      if (auto s = load(id)) out.push_back(std::move(*s));
    } catch (const std::exception& e) {
      if (errors) errors->push_back(id + ": " + e.what());
    }
  }
  return out;
}

void SessionStore::save_result(const std::string& id, const std::string& document_text) {
  std::lock_guard lock(file_mutex_);
  const auto final_path = root_ / "results" / (id + ".json");
  const auto tmp = root_ / "results" / (id + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << document_text;
    if (!out) throw Error("failed writing result for " + id);
  }
  std::filesystem::rename(tmp, final_path);
}

std::optional<std::string> SessionStore::load_result(const std::string& id) const {
  std::lock_guard lock(file_mutex_);
  std::ifstream in(root_ / "results" / (id + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace profiler
