#include "senseme/privacy.hpp"

#include <algorithm>
#include <fstream>

#include "senseme/error.hpp"

namespace senseme::privacy {

bool is_forbidden_key(std::string_view key) {
  std::string lower(key);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::find(kForbiddenKeys.begin(), kForbiddenKeys.end(), lower) != kForbiddenKeys.end();
}

std::optional<std::string> find_forbidden_key(const nlohmann::json& doc) {
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items()) {
      if (is_forbidden_key(key)) return key;
      if (auto hit = find_forbidden_key(value)) return hit;
    }
  } else if (doc.is_array()) {
    for (const auto& value : doc) {
      if (auto hit = find_forbidden_key(value)) return hit;
    }
  }
  return std::nullopt;
}

void require_clean(const nlohmann::json& doc) {
  if (auto key = find_forbidden_key(doc)) {
    throw Error(ErrorCode::PrivacyViolation, "payload carries forbidden key '" + *key + "'");
  }
}

AuditReport audit_file(const std::filesystem::path& path) {
  AuditReport report;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    ++report.lines;
    auto doc = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) {
      report.findings.push_back({report.lines, {}});
    } else if (auto key = find_forbidden_key(doc)) {
      report.findings.push_back({report.lines, *key});
    }
  }
  return report;
}

}  // namespace senseme::privacy
