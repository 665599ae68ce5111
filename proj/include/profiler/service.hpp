#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "profiler/batch_runner.hpp"
#include "profiler/pipeline.hpp"
#include "profiler/session_engine.hpp"
#include "profiler/session_log.hpp"

namespace httplib {
class Server;
}

namespace profiler {

/// Status code plus JSON body, independent of the HTTP library.
struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// HTTP+JSON service under /v1.
///
/// Participant-facing routes (session creation and answer submission) never
/// return scores, levels or estimates. Researcher-facing routes (result, state,
/// batch reports) return full documents. Every session step is appended to the
/// session's event log before the response is sent, and the constructor replays
/// existing logs, so a restarted service resumes sessions exactly where they were.
class ProfilerService {
 public:
  ProfilerService(std::shared_ptr<const Pipeline> pipeline, std::map<std::string, QuestionBank> banks,
                  std::filesystem::path data_dir);
  ~ProfilerService();

  ProfilerService(const ProfilerService&) = delete;
  ProfilerService& operator=(const ProfilerService&) = delete;

  ApiResponse health() const;
  ApiResponse create_session(const std::string& body);
  /// Body {"text", "question_number"?}. With question_number, a repeat of an
  /// already-recorded answer returns the current position without scoring again.
  ApiResponse submit_response(const std::string& session_id, const std::string& body);
  ApiResponse get_result(const std::string& session_id);
  ApiResponse get_state(const std::string& session_id) const;
  ApiResponse create_batch(const std::string& body);
  ApiResponse get_batch(const std::string& job_id) const;

  /// Blocks until a started batch job finishes (for tests and shutdown).
  void wait_for_batches();

  /// Registers the routes on `server`.
  void mount(httplib::Server& server);

  std::size_t session_count() const;
  std::vector<std::string> restore_errors() const { return restore_errors_; }

 private:
  struct SessionEntry {
    std::mutex mutex;
    SessionState state;
  };
  struct BatchJob {
    std::string status = "running";
    std::vector<ProfileResult> results;
    std::vector<CorpusRejection> rejections;
    std::vector<std::string> errors;
  };

  std::shared_ptr<SessionEntry> find_session(const std::string& id) const;
  std::string new_id(std::string_view prefix);
  ApiResponse store_and_render_result(SessionEntry& entry);

  std::shared_ptr<const Pipeline> pipeline_;
  std::map<std::string, QuestionBank> banks_;
  SessionStore store_;

  mutable std::mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::vector<std::string> restore_errors_;

  mutable std::mutex jobs_mutex_;
  std::map<std::string, std::shared_ptr<BatchJob>> jobs_;
  std::vector<std::jthread> workers_;

  std::mutex id_mutex_;
  std::uint64_t id_state_;
};

/// Runs `service` on host:port until stop() (blocking).
class ServiceRunner {
 public:
  explicit ServiceRunner(ProfilerService& service);
  ~ServiceRunner();
  /// Binds and serves on a background thread; port 0 picks a free port. Returns the bound port or -1.
  int start(const std::string& host, int port);
  /// Serves in the calling thread.
  bool run(const std::string& host, int port);
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

/// "host:port" -> (host, port). Throws ConfigError.
std::pair<std::string, int> parse_listen_addr(const std::string& addr);

}  // namespace profiler
