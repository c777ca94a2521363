#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "senseme/social.hpp"

namespace senseme {

struct Emotion {
  std::string_view id;
  std::string_view label;
};

inline constexpr std::array<Emotion, 5> kEmotionCatalog = {{
    {"e1", "happy"},
    {"e2", "calm"},
    {"e3", "tired"},
    {"e4", "sad"},
    {"e5", "angry"},
}};

bool is_known_emotion(std::string_view id);

enum class Role { device, teacher, parent };

std::string_view to_string(Role role);
std::optional<Role> role_from(std::string_view text);

struct ChildEntry {
  std::string child;
  std::string device;
  std::string group;  // class roster the child belongs to
};

// Children, their single device each, and roster groups. Loaded once at
// startup; immutable afterwards.
class Roster {
 public:
  Roster() = default;
  Roster(std::string school, std::vector<ChildEntry> children);

  const std::string& school() const { return school_; }
  const std::vector<ChildEntry>& children() const { return children_; }

  bool has_child(std::string_view child) const;
  bool has_device(std::string_view device) const;
  // Throws Error{UnknownChild}.
  const std::string& device_of(std::string_view child) const;
  // Throws Error{UnknownDevice}.
  const std::string& child_of(std::string_view device) const;
  const social::DeviceToChild& device_to_child() const { return device_to_child_; }

 private:
  std::string school_;
  std::vector<ChildEntry> children_;
  social::DeviceToChild device_to_child_;
  std::map<std::string, std::string, std::less<>> child_to_device_;
};

// {"school": "...", "children": [{"child": "c01", "device": "d01", "group": "5A"}]}
Roster parse_roster(std::string_view document);
Roster roster_from_json(const nlohmann::json& doc);

// Static bearer tokens, one per role: {"device": "...", "teacher": "...", "parent": "..."}
struct Tokens {
  std::string device;
  std::string teacher;
  std::string parent;

  std::optional<Role> role_for(std::string_view token) const;
};

Tokens parse_tokens(std::string_view document);

std::string read_file(const std::string& path);

}  // namespace senseme
