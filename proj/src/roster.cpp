#include "senseme/roster.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "senseme/error.hpp"

namespace senseme {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

const std::string& string_field(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_string() || obj[key].get_ref<const std::string&>().empty()) {
    schema(std::string("missing or empty string field '") + key + "'");
  }
  return obj[key].get_ref<const std::string&>();
}

json parse_document(std::string_view document) {
  auto doc = json::parse(document, nullptr, false);
  if (doc.is_discarded()) schema("malformed JSON");
  return doc;
}

}  // namespace

bool is_known_emotion(std::string_view id) {
  return std::any_of(kEmotionCatalog.begin(), kEmotionCatalog.end(),
                     [&](const Emotion& e) { return e.id == id; });
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::device: return "device";
    case Role::teacher: return "teacher";
    case Role::parent: return "parent";
  }
  return "device";
}

std::optional<Role> role_from(std::string_view text) {
  if (text == "device") return Role::device;
  if (text == "teacher") return Role::teacher;
  if (text == "parent") return Role::parent;
  return std::nullopt;
}

Roster::Roster(std::string school, std::vector<ChildEntry> children)
    : school_(std::move(school)), children_(std::move(children)) {
  for (const auto& c : children_) {
    if (c.child.find(':') != std::string::npos) schema("child id '" + c.child + "' contains ':'");
    if (!child_to_device_.emplace(c.child, c.device).second) {
      schema("child '" + c.child + "' listed twice");
    }
    if (!device_to_child_.emplace(c.device, c.child).second) {
      schema("device '" + c.device + "' assigned to two children");
    }
  }
}

bool Roster::has_child(std::string_view child) const {
  return child_to_device_.find(child) != child_to_device_.end();
}

bool Roster::has_device(std::string_view device) const {
  return device_to_child_.find(device) != device_to_child_.end();
}

const std::string& Roster::device_of(std::string_view child) const {
  auto it = child_to_device_.find(child);
  if (it == child_to_device_.end()) {
    throw Error(ErrorCode::UnknownChild, "unknown child '" + std::string(child) + "'");
  }
  return it->second;
}

const std::string& Roster::child_of(std::string_view device) const {
  auto it = device_to_child_.find(device);
  if (it == device_to_child_.end()) {
    throw Error(ErrorCode::UnknownDevice, "unknown device '" + std::string(device) + "'");
  }
  return it->second;
}

Roster roster_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("children") || !doc["children"].is_array()) {
    schema("roster needs a children array");
  }
  std::string school = doc.value("school", std::string{});
  std::vector<ChildEntry> children;
  for (const auto& c : doc["children"]) {
    if (!c.is_object()) schema("roster entry must be an object");
    children.push_back({string_field(c, "child"), string_field(c, "device"),
                        c.value("group", std::string{})});
  }
  return Roster(std::move(school), std::move(children));
}

Roster parse_roster(std::string_view document) { return roster_from_json(parse_document(document)); }

std::optional<Role> Tokens::role_for(std::string_view token) const {
  if (token.empty()) return std::nullopt;
  if (token == device) return Role::device;
  if (token == teacher) return Role::teacher;
  if (token == parent) return Role::parent;
  return std::nullopt;
}

Tokens parse_tokens(std::string_view document) {
  auto doc = parse_document(document);
  if (!doc.is_object()) schema("token file must be an object");
  Tokens t{string_field(doc, "device"), string_field(doc, "teacher"), string_field(doc, "parent")};
  if (t.device == t.teacher || t.device == t.parent || t.teacher == t.parent) {
    schema("role tokens must be distinct");
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace senseme
