#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "profiler/core_model.hpp"

namespace profiler {

inline constexpr const char* kSchemaVersion = "1.0";

/// Result document with a fixed field order. Scores are decimal strings with
/// two places so consumers never see binary-float artifacts.
nlohmann::ordered_json to_json_document(const ProfileResult& result);

/// Pretty-printed document text, newline-terminated.
std::string to_json_text(const ProfileResult& result);

/// Inverse of to_json_document over the fields the document carries
/// (raw answer text and segments are not part of it). Throws ValidationError.
ProfileResult from_json_document(const nlohmann::json& doc);

/// Plain-text summary for non-technical readers.
std::string to_report(const ProfileResult& result);

const nlohmann::json& profile_result_schema();
const nlohmann::json& participant_response_schema();

/// Schema violations of a result document; empty if valid.
std::vector<std::string> validate_result_document(const nlohmann::json& doc);

}  // namespace profiler
