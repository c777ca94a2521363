#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace senseme::privacy {

// Keys that would carry raw audio or precise location. Matched
// case-insensitively at any nesting depth.
inline constexpr std::array<std::string_view, 9> kForbiddenKeys = {
    "pcm", "audio", "wave", "samples", "lat", "lon", "latitude", "longitude", "gps"};

bool is_forbidden_key(std::string_view key);

// First forbidden key found in a depth-first walk, if any.
std::optional<std::string> find_forbidden_key(const nlohmann::json& doc);

// Throws Error{PrivacyViolation} when the document holds a forbidden key.
void require_clean(const nlohmann::json& doc);

struct AuditFinding {
  std::size_t line = 0;
  std::string key;  // empty when the line is not parseable JSON
};

struct AuditReport {
  std::size_t lines = 0;
  std::vector<AuditFinding> findings;

  bool clean() const { return findings.empty(); }
};

// Scans every line of a newline-delimited JSON file for forbidden keys.
AuditReport audit_file(const std::filesystem::path& path);

}  // namespace senseme::privacy
