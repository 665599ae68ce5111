#include "profiler/service.hpp"

#include <httplib.h>

#include <random>
#include <sstream>

#include "profiler/analysis.hpp"
#include "profiler/output.hpp"

namespace profiler {
namespace {

using json = nlohmann::json;

ApiResponse error(int status, std::string code, std::string message) {
  return {status, json{{"error", {{"code", std::move(code)}, {"message", std::move(message)}}}}};
}

json participant_question(const SessionState& s) {
  const Question* q = s.outstanding();
  return {{"question_id", q->question_id},
          {"number", static_cast<int>(s.asked.size())},
          {"text", q->text},
          {"reasked", s.outstanding_reasked()}};
}

ApiResponse position_response(const SessionState& s) {
  if (s.status == SessionStatus::Finished) {
    return {200, json{{"session_id", s.session_id}, {"done", true},
                      {"result", "/v1/sessions/" + s.session_id + "/result"}}};
  }
  return {200, json{{"session_id", s.session_id}, {"done", false}, {"question", participant_question(s)}}};
}

std::optional<json> parse_body(const std::string& body) {
  try {
    auto j = json::parse(body);
    if (j.is_object()) return j;
  } catch (const json::parse_error&) {
  }
  return std::nullopt;
}

}  // namespace

ProfilerService::ProfilerService(std::shared_ptr<const Pipeline> pipeline,
                                 std::map<std::string, QuestionBank> banks, std::filesystem::path data_dir)
    : pipeline_(std::move(pipeline)), banks_(std::move(banks)), store_(std::move(data_dir)) {
  std::random_device rd;
  id_state_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  for (auto& s : store_.load_all(&restore_errors_)) {
    auto entry = std::make_shared<SessionEntry>();
    const std::string id = s.session_id;
    entry->state = std::move(s);
    sessions_.emplace(id, std::move(entry));
  }
}

ProfilerService::~ProfilerService() { wait_for_batches(); }

std::string ProfilerService::new_id(std::string_view prefix) {
  std::lock_guard lock(id_mutex_);
  std::mt19937_64 rng(id_state_++ * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(
                                                               std::chrono::steady_clock::now().time_since_epoch().count()));
  std::ostringstream out;
  out << prefix << std::hex << rng() << rng();
  return out.str();
}

std::shared_ptr<ProfilerService::SessionEntry> ProfilerService::find_session(const std::string& id) const {
  std::lock_guard lock(registry_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t ProfilerService::session_count() const {
  std::lock_guard lock(registry_mutex_);
  return sessions_.size();
}

ApiResponse ProfilerService::health() const {
  return {200, json{{"status", "ok"}, {"backend", pipeline_->backend().name()}}};
}

ApiResponse ProfilerService::create_session(const std::string& body) {
  const auto req = parse_body(body);
  if (!req || !req->contains("domain") || !req->contains("self_evaluation") || !(*req)["domain"].is_string() ||
      !(*req)["self_evaluation"].is_string()) {
    return error(400, "BAD_REQUEST", "body must be {\"domain\": string, \"self_evaluation\": string}");
  }
  const std::string domain = (*req)["domain"].get<std::string>();
  auto bank = banks_.find(domain);
  if (bank == banks_.end()) return error(400, "DOMAIN_UNKNOWN", "unknown domain '" + domain + "'");
  ExpertiseLevel self;
  try {
    self = level_from_label((*req)["self_evaluation"].get<std::string>());
  } catch (const ValidationError& e) {
    return error(400, "LEVEL_UNKNOWN", e.what());
  }
  if (!pipeline_->backend().available()) {
    return error(503, "SCORER_UNAVAILABLE", "scorer backend '" + pipeline_->backend().name() + "' is unreachable");
  }
  auto entry = std::make_shared<SessionEntry>();
  std::string id;
  {
    std::lock_guard lock(registry_mutex_);
    do {
      id = new_id("s");
    } while (sessions_.contains(id));
    try {
      entry->state = start_session(id, domain, self, bank->second, pipeline_->config().session);
    } catch (const ConfigError& e) {
      return error(400, "DOMAIN_UNKNOWN", e.what());
    }
    store_.append(id, diff_events(std::nullopt, entry->state));
    sessions_.emplace(id, entry);
  }
  return {201, json{{"session_id", id}, {"question", participant_question(entry->state)}}};
}

ApiResponse ProfilerService::submit_response(const std::string& session_id, const std::string& body) {
  auto entry = find_session(session_id);
  if (!entry) return error(404, "SESSION_NOT_FOUND", "unknown session '" + session_id + "'");
  const auto req = parse_body(body);
  if (!req || !req->contains("text") || !(*req)["text"].is_string()) {
    return error(400, "BAD_REQUEST", "body must be {\"text\": string}");
  }
  std::optional<std::int64_t> answering;
  if (req->contains("question_number")) {
    if (!(*req)["question_number"].is_number_integer()) {
      return error(400, "BAD_REQUEST", "question_number must be an integer");
    }
    answering = (*req)["question_number"].get<std::int64_t>();
  }
  std::lock_guard lock(entry->mutex);
  const auto current = static_cast<std::int64_t>(entry->state.asked.size());
  // A client retrying an answer that was already recorded gets the current position back.
  if (answering && *answering < current + (entry->state.status == SessionStatus::Finished ? 1 : 0)) {
    return position_response(entry->state);
  }
  if (answering && *answering != current) {
    return error(409, "QUESTION_MISMATCH", "question " + std::to_string(*answering) +
                                               " is not the outstanding question");
  }
  if (entry->state.status == SessionStatus::Finished) {
    return error(409, "SESSION_FINISHED", "session '" + session_id + "' is finished");
  }
  const SessionState before = entry->state;
  SessionState after;
  try {
    after = profiler::submit_response(before, (*req)["text"].get<std::string>(), *pipeline_,
                                      banks_.at(before.domain));
  } catch (const ScorerError& e) {
    return error(502, "SCORER_FAILED", e.what());
  }
  store_.append(session_id, diff_events(before, after));
  entry->state = std::move(after);
  if (entry->state.status == SessionStatus::Finished) store_and_render_result(*entry);
  return position_response(entry->state);
}

ApiResponse ProfilerService::store_and_render_result(SessionEntry& entry) {
  const std::string id = entry.state.session_id;
  if (auto stored = store_.load_result(id)) return {200, json::parse(*stored)};
  const ProfileResult result = finalize(entry.state, *pipeline_);
  const std::string text = to_json_text(result);
  store_.save_result(id, text);
  return {200, json::parse(text)};
}

ApiResponse ProfilerService::get_result(const std::string& session_id) {
  auto entry = find_session(session_id);
  if (!entry) return error(404, "SESSION_NOT_FOUND", "unknown session '" + session_id + "'");
  std::lock_guard lock(entry->mutex);
  if (entry->state.status != SessionStatus::Finished) {
    return error(409, "SESSION_ACTIVE", "session '" + session_id + "' is not finished");
  }
  return store_and_render_result(*entry);
}

ApiResponse ProfilerService::get_state(const std::string& session_id) const {
  auto entry = find_session(session_id);
  if (!entry) return error(404, "SESSION_NOT_FOUND", "unknown session '" + session_id + "'");
  std::lock_guard lock(entry->mutex);
  return {200, session_state_to_json(entry->state)};
}

ApiResponse ProfilerService::create_batch(const std::string& body) {
  const auto req = parse_body(body);
  if (!req || !req->contains("files") || !(*req)["files"].is_array()) {
    return error(400, "CORPUS_MALFORMED", "body must be {\"files\": [{\"name\": string, \"content\": string}]}");
  }
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& f : (*req)["files"]) {
    if (!f.is_object() || !f.contains("name") || !f.contains("content") || !f["name"].is_string() ||
        !f["content"].is_string()) {
      return error(400, "CORPUS_MALFORMED", "each file needs string 'name' and 'content'");
    }
    files.emplace_back(f["name"].get<std::string>(), f["content"].get<std::string>());
  }
  Corpus corpus = parse_corpus(files);
  if (corpus.transcripts.empty()) {
    json items = json::array();
    for (const auto& r : corpus.rejections) {
      items.push_back({{"file", r.file}, {"line", r.line}, {"message", r.message}});
    }
    ApiResponse resp = error(400, "CORPUS_MALFORMED", "no valid transcripts in corpus");
    resp.body["error"]["rejections"] = items;
    return resp;
  }

  auto job = std::make_shared<BatchJob>();
  job->rejections = corpus.rejections;
  std::string id;
  {
    std::lock_guard lock(jobs_mutex_);
    do {
      id = new_id("b");
    } while (jobs_.contains(id));
    jobs_.emplace(id, job);
    workers_.emplace_back([this, job, transcripts = std::move(corpus.transcripts)] {
      std::vector<std::map<std::string, ProfileResult>> slots(transcripts.size());
      std::vector<std::string> errors;
      run_batch(
          transcripts, *pipeline_,
          [&](std::size_t i, const Transcript&, const std::map<std::string, ProfileResult>& r) { slots[i] = r; },
          std::max(1u, std::thread::hardware_concurrency()),
          [&](std::size_t, const Transcript& t, const std::string& msg) {
            errors.push_back(t.participant_id + ": " + msg);
          });
      std::lock_guard lock(jobs_mutex_);
      for (auto& m : slots) {
        for (auto& [_, r] : m) job->results.push_back(std::move(r));
      }
      job->errors = std::move(errors);
      job->status = "done";
    });
  }
  return {202, json{{"job_id", id}, {"status", "running"}, {"report", "/v1/batch/" + id}}};
}

ApiResponse ProfilerService::get_batch(const std::string& job_id) const {
  std::lock_guard lock(jobs_mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return error(404, "JOB_NOT_FOUND", "unknown batch job '" + job_id + "'");
  const BatchJob& job = *it->second;
  json body{{"job_id", job_id}, {"status", job.status}};
  json rejections = json::array();
  for (const auto& r : job.rejections) {
    rejections.push_back({{"file", r.file}, {"line", r.line}, {"message", r.message}});
  }
  body["rejections"] = rejections;
  if (job.status == "done") {
    json results = json::array();
    for (const auto& r : job.results) results.push_back(json(to_json_document(r)));
    body["results"] = results;
    body["errors"] = job.errors;
    body["agreement"] = json(agreement_to_json(agreement_table(job.results)));
  }
  return {200, body};
}

void ProfilerService::wait_for_batches() {
  std::vector<std::jthread> workers;
  {
    std::lock_guard lock(jobs_mutex_);
    workers.swap(workers_);
  }
  workers.clear();  // joins
}

void ProfilerService::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get("/v1/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server.Post("/v1/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_session(req.body));
  });
  server.Post(R"(/v1/sessions/([A-Za-z0-9_-]+)/responses)",
              [this, send](const httplib::Request& req, httplib::Response& res) {
                send(res, submit_response(req.matches[1], req.body));
              });
  server.Get(R"(/v1/sessions/([A-Za-z0-9_-]+)/result)",
             [this, send](const httplib::Request& req, httplib::Response& res) { send(res, get_result(req.matches[1])); });
  server.Get(R"(/v1/sessions/([A-Za-z0-9_-]+)/state)",
             [this, send](const httplib::Request& req, httplib::Response& res) { send(res, get_state(req.matches[1])); });
  server.Post("/v1/batch", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, create_batch(req.body));
  });
  server.Get(R"(/v1/batch/([A-Za-z0-9_-]+))",
             [this, send](const httplib::Request& req, httplib::Response& res) { send(res, get_batch(req.matches[1])); });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(json{{"error", {{"code", "NOT_FOUND"}, {"message", "no such route"}}}}.dump(),
                    "application/json");
  });
}

ServiceRunner::ServiceRunner(ProfilerService& service) : server_(std::make_unique<httplib::Server>()) {
  service.mount(*server_);
}

ServiceRunner::~ServiceRunner() { stop(); }

int ServiceRunner::start(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) return -1;
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

bool ServiceRunner::run(const std::string& host, int port) { return server_->listen(host, port); }

void ServiceRunner::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::pair<std::string, int> parse_listen_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon + 1 == addr.size()) {
    throw ConfigError("listen address must be host:port, got '" + addr + "'");
  }
  try {
    const int port = std::stoi(addr.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::out_of_range("port");
    return {addr.substr(0, colon), port};
  } catch (const std::exception&) {
    throw ConfigError("invalid port in listen address '" + addr + "'");
  }
}

}  // namespace profiler
