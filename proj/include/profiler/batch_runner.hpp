#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "profiler/core_model.hpp"
#include "profiler/pipeline.hpp"

namespace profiler {

struct Turn {
  std::string question;
  std::string answer;
  std::string domain;

  friend bool operator==(const Turn&, const Turn&) = default;
};

/// One participant's pre-recorded interview. Every turn's domain is listed in `domains`.
struct Transcript {
  std::string participant_id;
  std::vector<std::string> domains;
  std::map<std::string, ExpertiseLevel> self_evaluations;
  std::vector<Turn> turns;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// A file that could not be loaded.
struct CorpusRejection {
  std::string file;
  std::size_t line = 0;  // 0 when the problem is not tied to a line
  std::string message;
};

struct Corpus {
  std::vector<Transcript> transcripts;
  std::vector<std::string> sources;  // parallel to transcripts
  std::vector<CorpusRejection> rejections;
  std::vector<std::string> warnings;
};

/// Parses and validates one transcript document. Throws ParseError.
Transcript parse_transcript(std::string_view json_text, const std::string& source_name);

/// Loads (name, content) pairs. Bad files and duplicate participant ids are
/// rejected individually; the rest of the corpus still loads.
Corpus parse_corpus(const std::vector<std::pair<std::string, std::string>>& files);

/// Loads every *.json file in `dir` in name order. Throws ConfigError if `dir` is unreadable.
Corpus load_corpus(const std::filesystem::path& dir);

/// One result per listed domain, in domain-name order.
std::map<std::string, ProfileResult> profile_transcript(const Transcript& transcript, const Pipeline& pipeline);

using BatchSink = std::function<void(std::size_t index, const Transcript&,
                                     const std::map<std::string, ProfileResult>&)>;

/// Profiles transcripts on up to `threads` workers, handing each finished
/// transcript to `sink` (calls to `sink` are serialized, order is not).
/// A scorer failure is reported through `on_error` and the transcript skipped.
void run_batch(const std::vector<Transcript>& transcripts, const Pipeline& pipeline, const BatchSink& sink,
               unsigned threads = 1,
               const std::function<void(std::size_t, const Transcript&, const std::string&)>& on_error = {});

}  // namespace profiler
