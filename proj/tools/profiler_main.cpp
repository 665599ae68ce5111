// Command-line entry points: batch profiling, live interviews, analysis, and the HTTP service.

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "profiler/analysis.hpp"
#include "profiler/batch_runner.hpp"
#include "profiler/output.hpp"
#include "profiler/pipeline.hpp"
#include "profiler/service.hpp"
#include "profiler/session_engine.hpp"
#include "profiler/session_log.hpp"

namespace fs = std::filesystem;
using namespace profiler;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

struct CommonOptions {
  std::string backend = "heuristic";
  std::string lexicon_dir = "data/lexicons";
  std::string config_path;
  std::string llm_url;
  std::string llm_model;
  int llm_timeout_ms = 0;
  std::int64_t seed = -1;
  int max_questions = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--backend", o.backend, "Scorer backend: heuristic | llm | llm-with-heuristic-fallback")
      ->envname("PROFILER_BACKEND")
      ->capture_default_str();
  cmd->add_option("--lexicon-dir", o.lexicon_dir, "Directory of per-domain lexicon files")->capture_default_str();
  cmd->add_option("--config", o.config_path, "JSON configuration file (flags take precedence)");
  cmd->add_option("--llm-url", o.llm_url, "Chat-completions endpoint URL")->envname("PROFILER_LLM_URL");
  cmd->add_option("--llm-model", o.llm_model, "Model name sent to the endpoint")->envname("PROFILER_LLM_MODEL");
  cmd->add_option("--llm-timeout-ms", o.llm_timeout_ms, "Endpoint timeout in milliseconds")
      ->envname("PROFILER_LLM_TIMEOUT_MS");
  cmd->add_option("--seed", o.seed, "Seed for question order within each difficulty pool");
  cmd->add_option("--max-questions", o.max_questions, "Questions per live session");
}

std::shared_ptr<const Pipeline> build_pipeline(const CommonOptions& o) {
  ProfilerConfig config = o.config_path.empty() ? ProfilerConfig{} : load_config(o.config_path);
  if (o.seed >= 0) config.session.seed = static_cast<std::uint64_t>(o.seed);
  if (o.max_questions > 0) {
    config.session.max_questions = o.max_questions;
    config.session.max_questions_by_domain.clear();
  }
  LlmEndpointConfig llm = LlmEndpointConfig::from_env();
  if (!o.llm_url.empty()) llm.url = o.llm_url;
  if (!o.llm_model.empty()) llm.model = o.llm_model;
  if (o.llm_timeout_ms > 0) llm.timeout_ms = o.llm_timeout_ms;
  auto backend = make_backend(backend_kind_from_string(o.backend), llm);
  return std::make_shared<const Pipeline>(std::move(config), std::move(backend),
                                          LexiconSet::load_dir(o.lexicon_dir));
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

std::string result_stem(const ProfileResult& r) { return r.participant_id + "__" + r.domain; }

int cmd_profile(const std::string& corpus_path, const CommonOptions& common, const std::string& out_dir,
                unsigned threads) {
  if (!fs::is_directory(corpus_path)) {
    std::cerr << "error: corpus directory not readable: " << corpus_path << "\n";
    return kExitError;
  }
  auto pipeline = build_pipeline(common);
  Corpus corpus = load_corpus(corpus_path);
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& r : corpus.rejections) {
    std::cerr << "rejected: " << r.file << ":" << r.line << ": " << r.message << "\n";
  }

  std::vector<std::map<std::string, ProfileResult>> slots(corpus.transcripts.size());
  std::vector<std::string> failures;
  run_batch(
      corpus.transcripts, *pipeline,
      [&](std::size_t i, const Transcript& t, const std::map<std::string, ProfileResult>& results) {
        for (const auto& [domain, r] : results) {
          write_file(fs::path(out_dir) / "results" / (result_stem(r) + ".json"), to_json_text(r));
          write_file(fs::path(out_dir) / "reports" / (result_stem(r) + ".txt"), to_report(r));
        }
        std::cout << "profiled " << t.participant_id << " (" << results.size() << " domain(s))\n";
        slots[i] = results;
      },
      threads,
      [&](std::size_t, const Transcript& t, const std::string& msg) {
        failures.push_back(t.participant_id + ": " + msg);
        std::cerr << "scoring failed: " << t.participant_id << ": " << msg << "\n";
      });

  std::vector<ProfileResult> all;
  for (auto& m : slots) {
    for (auto& [_, r] : m) all.push_back(std::move(r));
  }
  const auto table = agreement_table(all);
  write_file(fs::path(out_dir) / "agreement.json", agreement_to_json(table).dump(2) + "\n");
  write_file(fs::path(out_dir) / "agreement.txt", render_agreement(table));
  std::ostringstream rejected;
  for (const auto& r : corpus.rejections) rejected << r.file << ":" << r.line << ": " << r.message << "\n";
  for (const auto& f : failures) rejected << f << "\n";
  write_file(fs::path(out_dir) / "rejections.txt", rejected.str());
  std::cout << render_agreement(table);
  return corpus.rejections.empty() && failures.empty() ? kExitOk : kExitPartial;
}

int cmd_interview(const std::string& domain, const std::string& self_label, const CommonOptions& common,
                  const std::string& bank_dir, const std::string& state_dir, const std::string& resume_id) {
  auto pipeline = build_pipeline(common);
  const auto banks = load_question_banks(bank_dir);
  SessionStore store(state_dir);

  SessionState state;
  if (!resume_id.empty()) {
    auto loaded = store.load(resume_id);
    if (!loaded) {
      std::cerr << "error: no saved session '" << resume_id << "' in " << state_dir << "\n";
      return kExitError;
    }
    state = std::move(*loaded);
    std::cout << "Resuming session " << state.session_id << " (" << state.scored.size() << " of "
              << state.max_questions << " answered).\n";
  } else {
    if (self_label.empty()) {
      std::cerr << "error: --self is required for a new interview\n";
      return kExitError;
    }
    auto bank = banks.find(domain);
    if (bank == banks.end()) {
      std::cerr << "error: no question bank for domain '" << domain << "'\n";
      return kExitError;
    }
    std::random_device rd;
    std::ostringstream id;
    id << "cli" << std::hex << ((static_cast<std::uint64_t>(rd()) << 32) | rd());
    state = start_session(id.str(), domain, level_from_label(self_label), bank->second,
                          pipeline->config().session);
    store.append(state.session_id, diff_events(std::nullopt, state));
    std::cout << "Session " << state.session_id << " started. Answer each question on one line.\n";
  }
  const QuestionBank& bank = banks.at(state.domain);

  while (state.status == SessionStatus::Active) {
    const Question* q = state.outstanding();
    std::cout << "\nQ" << state.asked.size() << ". " << q->text << "\n> " << std::flush;
    std::string answer;
    if (!std::getline(std::cin, answer)) {
      std::cout << "\nInterview interrupted. Resume with: profiler interview " << state.domain << " --resume "
                << state.session_id << " --state-dir " << state_dir << "\n";
      return kExitError;
    }
    const SessionState before = state;
    try {
      state = submit_response(before, answer, *pipeline, bank);
    } catch (const ScorerError& e) {
      std::cerr << "error: scoring failed twice for this question: " << e.what() << "\n";
      return kExitError;
    }
    store.append(state.session_id, diff_events(before, state));
    if (state.outstanding_reasked() && state.scored.size() == before.scored.size()) {
      std::cout << "(That answer could not be scored; please answer again.)\n";
    }
  }
  const ProfileResult result = finalize(state, *pipeline);
  store.save_result(state.session_id, to_json_text(result));
  std::cout << "\n" << to_report(result);
  return kExitOk;
}

std::vector<ProfileResult> load_result_documents(const fs::path& dir, std::vector<std::string>& problems) {
  std::vector<ProfileResult> out;
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    try {
      std::ifstream in(f);
      out.push_back(from_json_document(nlohmann::json::parse(in)));
    } catch (const std::exception& e) {
      problems.push_back(f.string() + ": " + e.what());
    }
  }
  return out;
}

int cmd_analyze(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "error: results directory not found: " << dir << "\n";
    return kExitError;
  }
  std::vector<std::string> problems;
  const auto results = load_result_documents(fs::path(dir) / "results", problems);
  std::vector<SessionState> finished;
  if (fs::is_directory(fs::path(dir) / "sessions")) {
    SessionStore store(dir);
    for (auto& s : store.load_all(&problems)) {
      if (s.status == SessionStatus::Finished) finished.push_back(std::move(s));
    }
  }
  for (const auto& p : problems) std::cerr << "skipped: " << p << "\n";
  if (results.empty() && finished.empty()) {
    std::cerr << "error: no result documents or finished sessions under " << dir << "\n";
    return kExitError;
  }

  nlohmann::ordered_json doc;
  const auto agreement = agreement_table(results);
  doc["agreement"] = agreement_to_json(agreement);
  std::cout << render_agreement(agreement) << "\n";
  if (!finished.empty()) {
    for (auto metric : {ConvergenceMetric::Stability, ConvergenceMetric::WithinOne, ConvergenceMetric::Exact}) {
      const auto table = convergence_table(finished, metric);
      doc["convergence"].push_back(convergence_to_json(table));
      std::cout << render_convergence(table) << "\n";
    }
    std::size_t widened = 0;
    for (const auto& s : finished) widened += no_widening_check(s) ? 0 : 1;
    doc["sessions"] = finished.size();
    doc["sessions_widened_after_within_one"] = widened;
    std::cout << "Sessions: " << finished.size() << "; left the +/-1 band after entering it: " << widened << "\n";
  }
  write_file(fs::path(dir) / "analysis.json", doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_serve(const CommonOptions& common, const std::string& listen, const std::string& data_dir,
              const std::string& bank_dir) {
  auto pipeline = build_pipeline(common);
  auto banks = load_question_banks(bank_dir);
  const auto [host, port] = parse_listen_addr(listen);
  ProfilerService service(pipeline, std::move(banks), data_dir);
  for (const auto& e : service.restore_errors()) std::cerr << "warning: could not restore " << e << "\n";
  std::cerr << "restored " << service.session_count() << " session(s); listening on " << host << ":" << port
            << "\n";
  ServiceRunner runner(service);
  return runner.run(host, port) ? kExitOk : kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expertise profiler: classify expertise from natural-language answers"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* profile = app.add_subcommand("profile", "Profile a directory of transcripts");
  std::string corpus_path, out_dir = "profile-out";
  unsigned threads = 1;
  profile->add_option("corpus", corpus_path, "Transcript corpus directory")->required();
  profile->add_option("--out", out_dir, "Output directory")->capture_default_str();
  profile->add_option("--threads", threads, "Transcripts profiled in parallel")->capture_default_str();
  add_common(profile, common);

  auto* interview = app.add_subcommand("interview", "Run an adaptive interview on the terminal");
  std::string domain, self_label, bank_dir = "data/banks", state_dir = "profiler-data", resume_id;
  interview->add_option("domain", domain, "Interview domain")->required();
  interview->add_option("--self", self_label, "Self-evaluated level (Novice, Basic, Advanced, Expert)");
  interview->add_option("--bank-dir", bank_dir, "Directory of question banks")->capture_default_str();
  interview->add_option("--state-dir", state_dir, "Where session logs and results are kept")
      ->envname("PROFILER_DATA_DIR")
      ->capture_default_str();
  interview->add_option("--resume", resume_id, "Resume a saved session by id");
  add_common(interview, common);

  auto* analyze = app.add_subcommand("analyze", "Agreement and convergence tables from stored results");
  std::string analyze_dir;
  analyze->add_option("results_dir", analyze_dir, "Directory with results/ and optionally sessions/")->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string listen = "127.0.0.1:8080", data_dir = "profiler-data", serve_bank_dir = "data/banks";
  serve->add_option("--listen", listen, "host:port")->envname("PROFILER_LISTEN_ADDR")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Session logs and results")->envname("PROFILER_DATA_DIR")->capture_default_str();
  serve->add_option("--bank-dir", serve_bank_dir, "Directory of question banks")->capture_default_str();
  add_common(serve, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*profile) return cmd_profile(corpus_path, common, out_dir, threads);
    if (*interview) return cmd_interview(domain, self_label, common, bank_dir, state_dir, resume_id);
    if (*analyze) return cmd_analyze(analyze_dir);
    if (*serve) return cmd_serve(common, listen, data_dir, serve_bank_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
