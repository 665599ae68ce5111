#include "profiler/batch_runner.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace profiler {
namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first occurrence of "key": in the source, for validation messages.
std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string needle = "\"" + std::string(key) + "\"";
  const auto pos = text.find(needle);
  return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

}  // namespace

Transcript parse_transcript(std::string_view json_text, const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source_name, line_of_offset(json_text, e.byte), e.what());
  }
  auto fail = [&](std::string_view key, const std::string& message) -> ParseError {
    return ParseError(source_name, line_of_key(json_text, key), message);
  };
  if (!doc.is_object()) throw ParseError(source_name, 1, "transcript must be a JSON object");
  for (const char* key : {"participant_id", "domains", "self_evaluations", "turns"}) {
    if (!doc.contains(key)) throw ParseError(source_name, 0, std::string("missing field '") + key + "'");
  }

  Transcript t;
  try {
    t.participant_id = doc.at("participant_id").get<std::string>();
    t.domains = doc.at("domains").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw fail("domains", e.what());
  }
  if (t.participant_id.empty()) throw fail("participant_id", "participant_id is empty");
  if (t.domains.empty()) throw fail("domains", "domains is empty");
  std::set<std::string> domain_set(t.domains.begin(), t.domains.end());
  if (domain_set.size() != t.domains.size()) throw fail("domains", "duplicate domain tag");

  const auto& selfs = doc.at("self_evaluations");
  if (!selfs.is_object()) throw fail("self_evaluations", "self_evaluations must be an object");
  for (const auto& [domain, value] : selfs.items()) {
    if (!domain_set.contains(domain)) {
      throw fail("self_evaluations", "self-evaluation for unlisted domain '" + domain + "'");
    }
    if (!value.is_string()) throw fail("self_evaluations", "self-evaluation must be a level label");
    try {
      t.self_evaluations.emplace(domain, level_from_label(value.get<std::string>()));
    } catch (const ValidationError& e) {
      throw fail("self_evaluations", e.what());
    }
  }

  const auto& turns = doc.at("turns");
  if (!turns.is_array()) throw fail("turns", "turns must be an array");
  for (std::size_t i = 0; i < turns.size(); ++i) {
    try {
      Turn turn{turns[i].at("question").get<std::string>(), turns[i].at("answer").get<std::string>(),
                turns[i].at("domain").get<std::string>()};
      if (!domain_set.contains(turn.domain)) {
        throw fail("turns", "turn " + std::to_string(i) + " has unlisted domain '" + turn.domain + "'");
      }
      t.turns.push_back(std::move(turn));
    } catch (const nlohmann::json::exception& e) {
      throw fail("turns", "turn " + std::to_string(i) + ": " + e.what());
    }
  }
  return t;
}

Corpus parse_corpus(const std::vector<std::pair<std::string, std::string>>& files) {
  Corpus corpus;
  std::vector<Transcript> parsed;
  std::vector<std::string> names;
  for (const auto& [name, content] : files) {
    try {
      parsed.push_back(parse_transcript(content, name));
      names.push_back(name);
    } catch (const ParseError& e) {
      corpus.rejections.push_back({e.file(), e.line(), e.message()});
    }
  }
  std::map<std::string, std::vector<std::size_t>> by_participant;
  for (std::size_t i = 0; i < parsed.size(); ++i) by_participant[parsed[i].participant_id].push_back(i);
  std::vector<bool> keep(parsed.size(), true);
  for (const auto& [pid, idx] : by_participant) {
    if (idx.size() < 2) continue;
    std::string listing;
    for (std::size_t k = 0; k < idx.size(); ++k) listing += (k ? ", " : "") + names[idx[k]];
    for (std::size_t i : idx) {
      keep[i] = false;
      corpus.rejections.push_back({names[i], 0, "duplicate participant_id '" + pid + "' in " + listing});
    }
  }
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!keep[i]) continue;
    corpus.transcripts.push_back(std::move(parsed[i]));
    corpus.sources.push_back(names[i]);
  }
  if (files.empty()) corpus.warnings.push_back("corpus is empty");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw ConfigError("corpus directory not readable: " + dir.string());
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<std::pair<std::string, std::string>> files;
  Corpus unreadable;
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
      unreadable.rejections.push_back({p.string(), 0, "cannot read file"});
      continue;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    files.emplace_back(p.string(), buf.str());
  }
  Corpus corpus = parse_corpus(files);
  corpus.rejections.insert(corpus.rejections.end(), unreadable.rejections.begin(), unreadable.rejections.end());
  return corpus;
}

std::map<std::string, ProfileResult> profile_transcript(const Transcript& t, const Pipeline& pipeline) {
  std::map<std::string, ProfileResult> out;
  std::vector<std::string> domains = t.domains;
  std::sort(domains.begin(), domains.end());
  for (const auto& domain : domains) {
    std::vector<ScoredResponse> scored;
    std::size_t turn_index = 0;
    for (const auto& turn : t.turns) {
      ++turn_index;
      if (turn.domain != domain) continue;
      scored.push_back(pipeline.score(domain, turn.question,
                                      t.participant_id + "-t" + std::to_string(turn_index), turn.answer));
    }
    std::optional<ExpertiseLevel> self;
    if (auto it = t.self_evaluations.find(domain); it != t.self_evaluations.end()) self = it->second;
    out.emplace(domain, pipeline.profile(t.participant_id, domain, std::move(scored), self));
  }
  return out;
}

void run_batch(const std::vector<Transcript>& transcripts, const Pipeline& pipeline, const BatchSink& sink,
               unsigned threads,
               const std::function<void(std::size_t, const Transcript&, const std::string&)>& on_error) {
  std::atomic<std::size_t> next{0};
  std::mutex sink_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < transcripts.size(); i = next++) {
      try {
        auto results = profile_transcript(transcripts[i], pipeline);
        std::lock_guard lock(sink_mutex);
        sink(i, transcripts[i], results);
      } catch (const ScorerError& e) {
        std::lock_guard lock(sink_mutex);
        if (on_error) on_error(i, transcripts[i], e.what());
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(transcripts.size())));
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
}

}  // namespace profiler
