#pragma once

#include <string>

#include <json.hpp>

#include "profiler/scoring.hpp"

namespace profiler {

struct LlmEndpointConfig {
  /// Full URL of a chat-completions endpoint, e.g. http://127.0.0.1:8000/v1/chat/completions.
  std::string url;
  std::string model = "llama-3.1-8b-instruct";
  std::string api_key;
  int timeout_ms = 30000;
  /// Extra attempts after a malformed reply.
  int max_retries = 2;

  /// Reads PROFILER_LLM_URL, PROFILER_LLM_MODEL, PROFILER_LLM_TIMEOUT_MS, PROFILER_LLM_API_KEY.
  static LlmEndpointConfig from_env();
};

/// Scores through an OpenAI-style chat-completions endpoint at temperature 0.
///
/// The model must reply with one JSON object holding exactly the keys
/// terminology, depth, application, rigor, uncertainty (integers 0..3),
/// penalty, boost (booleans) and rationale (non-empty string). A reply that
/// breaks this contract is retried up to max_retries times before
/// UnscoreableResponseError; a failed HTTP exchange raises TransportError.
class LlmScorer final : public ScorerBackend {
 public:
  explicit LlmScorer(LlmEndpointConfig config);

  std::string name() const override { return "llm"; }
  BackendVerdict score(const ScoringRequest& request) const override;
  bool available() const override;

  /// Request body sent for `request`.
  nlohmann::json build_request(const ScoringRequest& request) const;

  const LlmEndpointConfig& config() const { return config_; }

 private:
  LlmEndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

/// Parses the assistant message content. Throws UnscoreableResponseError with
/// a reason when the content violates the reply contract.
BackendVerdict parse_llm_reply(const std::string& content);

/// Rubric instructions sent as the system message.
const std::string& rubric_prompt();

}  // namespace profiler
