#include "profiler/llm_scorer.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

#include <httplib.h>

namespace profiler {
namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

// Splits "http://host:port/path" into ("http://host:port", "/path").
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("LLM endpoint URL must include a scheme: '" + url + "'");
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

const std::set<std::string> kReplyKeys = {"terminology", "depth",   "application", "rigor",
                                          "uncertainty", "penalty", "boost",       "rationale"};

int feature_value(const nlohmann::json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw UnscoreableResponseError(std::string("'") + key + "' is not an integer");
  }
  const auto n = v.get<std::int64_t>();
  if (n < 0 || n > kMaxFeatureScore) {
    throw UnscoreableResponseError(std::string("'") + key + "' out of range [0,3]: " + std::to_string(n));
  }
  return static_cast<int>(n);
}

}  // namespace

LlmEndpointConfig LlmEndpointConfig::from_env() {
  LlmEndpointConfig c;
  c.url = env_or("PROFILER_LLM_URL", "");
  c.model = env_or("PROFILER_LLM_MODEL", c.model);
  c.api_key = env_or("PROFILER_LLM_API_KEY", "");
  const std::string timeout = env_or("PROFILER_LLM_TIMEOUT_MS", "");
  if (!timeout.empty()) c.timeout_ms = std::stoi(timeout);
  return c;
}

const std::string& rubric_prompt() {
  static const std::string prompt =
      "You are an expertise profiler. Score the participant's answer on five features, "
      "each an integer from 0 (absent) to 3 (strong):\n"
      "- terminology: how accurately domain-specific vocabulary is applied.\n"
      "- depth: how well ideas are linked together beyond surface definitions "
      "(explaining how something works and why it matters).\n"
      "- application: how knowledge is applied to real-life situations.\n"
      "- rigor: logical structure, clarity, and evidence presented.\n"
      "- uncertainty: handling of uncertainty; lower the score for hedging phrases such as "
      "\"I think\" or \"maybe\" and for strong claims that lack support.\n"
      "Set penalty to true if the answer states something factually incorrect. "
      "Set boost to true if the answer states a clearly correct, substantive fact. "
      "Never set both.\n"
      "Reply with a single JSON object and nothing else, with exactly these keys: "
      "terminology, depth, application, rigor, uncertainty (integers 0-3), "
      "penalty, boost (booleans), rationale (a short non-empty string).";
  return prompt;
}

BackendVerdict parse_llm_reply(const std::string& content) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    throw UnscoreableResponseError(std::string("reply is not JSON: ") + e.what());
  }
  if (!obj.is_object()) throw UnscoreableResponseError("reply is not a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!kReplyKeys.contains(key)) throw UnscoreableResponseError("unexpected key '" + key + "'");
  }
  for (const auto& key : kReplyKeys) {
    if (!obj.contains(key)) throw UnscoreableResponseError("missing key '" + key + "'");
  }
  if (!obj["penalty"].is_boolean() || !obj["boost"].is_boolean()) {
    throw UnscoreableResponseError("penalty/boost must be booleans");
  }
  if (!obj["rationale"].is_string() || obj["rationale"].get<std::string>().empty()) {
    throw UnscoreableResponseError("rationale must be a non-empty string");
  }
  BackendVerdict v;
  v.features = FeatureScores(feature_value(obj, "terminology"), feature_value(obj, "depth"),
                             feature_value(obj, "application"), feature_value(obj, "rigor"),
                             feature_value(obj, "uncertainty"));
  v.penalty = obj["penalty"].get<bool>();
  v.boost = obj["boost"].get<bool>();
  v.rationale = obj["rationale"].get<std::string>();
  v.backend = "llm";
  return v;
}

LlmScorer::LlmScorer(LlmEndpointConfig config) : config_(std::move(config)) {
  if (config_.url.empty()) throw ConfigError("LLM backend selected but no endpoint URL configured");
  std::tie(scheme_host_port_, path_) = split_url(config_.url);
}

nlohmann::json LlmScorer::build_request(const ScoringRequest& request) const {
  std::ostringstream user;
  user << "Domain: " << request.domain << "\n";
  user << "Question: " << request.question << "\n";
  user << "Answer (normalized, one sentence per line):\n";
  for (const auto& s : request.segments) user << "[" << s.index << "] " << s.text << "\n";
  std::set<std::string> terms;
  std::vector<std::string> facts;
  for (const auto& s : request.segments) {
    terms.insert(s.term_hits.begin(), s.term_hits.end());
    for (const auto& f : s.fact_hits) {
      facts.push_back(std::string(to_string(f.kind)) + ": " + f.canonical);
    }
  }
  if (!terms.empty()) {
    user << "Domain terms detected:";
    for (const auto& t : terms) user << " " << t << ";";
    user << "\n";
  }
  if (!facts.empty()) {
    user << "Lexicon fact matches:\n";
    for (const auto& f : facts) user << "- " << f << "\n";
  }
  return {
      {"model", config_.model},
      {"temperature", 0},
      {"response_format", {{"type", "json_object"}}},
      {"messages",
       nlohmann::json::array({{{"role", "system"}, {"content", rubric_prompt()}},
                              {{"role", "user"}, {"content", user.str()}}})},
  };
}

BackendVerdict LlmScorer::score(const ScoringRequest& request) const {
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::milliseconds(config_.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  const std::string body = build_request(request).dump();

  std::string last_problem;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      throw TransportError("inference endpoint " + config_.url + " unreachable: " +
                           httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
      throw TransportError("inference endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
      const auto envelope = nlohmann::json::parse(res->body);
      const auto& content = envelope.at("choices").at(0).at("message").at("content");
      if (!content.is_string()) throw UnscoreableResponseError("message content is not a string");
      return parse_llm_reply(content.get<std::string>());
    } catch (const UnscoreableResponseError& e) {
      last_problem = e.what();
    } catch (const nlohmann::json::exception& e) {
      last_problem = std::string("malformed completion envelope: ") + e.what();
    }
  }
  throw UnscoreableResponseError("no valid reply after " + std::to_string(config_.max_retries + 1) +
                                 " attempts: " + last_problem);
}

bool LlmScorer::available() const {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(std::chrono::milliseconds(std::min(config_.timeout_ms, 2000)));
  client.set_read_timeout(std::chrono::milliseconds(std::min(config_.timeout_ms, 2000)));
  return static_cast<bool>(client.Get("/"));
}

}  // namespace profiler
