#include "senseme/payloads.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "senseme/error.hpp"

namespace senseme::payloads {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

void only_keys(const json& j, std::initializer_list<std::string_view> allowed, const char* what) {
  if (!j.is_object()) schema(std::string(what) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema(std::string("unknown field '") + key + "' in " + what);
    }
  }
}

const std::string& str(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string() || j[key].get_ref<const std::string&>().empty()) {
    schema(std::string("field '") + key + "' must be a non-empty string");
  }
  return j[key].get_ref<const std::string&>();
}

Timestamp timestamp(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    schema(std::string("field '") + key + "' must be an integer timestamp");
  }
  return j[key].get<Timestamp>();
}

const json& array(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty()) {
    schema(std::string("field '") + key + "' must be a non-empty array");
  }
  return j[key];
}

std::size_t utf8_length(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

}  // namespace

void check_text(const std::string& text) {
  if (std::all_of(text.begin(), text.end(),
                  [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; })) {
    throw Error(ErrorCode::EmptyText, "text is empty");
  }
  if (utf8_length(text) > kMaxTextLength) {
    schema("text longer than " + std::to_string(kMaxTextLength) + " characters");
  }
}

FeatureBatch feature_batch_from_json(const json& j) {
  only_keys(j, {"device", "features"}, "feature batch");
  FeatureBatch batch;
  batch.device = str(j, "device");
  for (const auto& f : array(j, "features")) {
    only_keys(f, {"t", "kind", "value"}, "feature");
    features::SecondFeature out;
    out.device = batch.device;
    out.t = timestamp(f, "t");
    out.kind = features::sensor_kind_from(str(f, "kind"));
    if (!f.contains("value") || !f["value"].is_number()) schema("feature value must be a number");
    out.value = f["value"].get<double>();
    if (!std::isfinite(out.value) || out.value < 0.0) schema("feature value must be >= 0");
    if (out.kind == features::SensorKind::audio && out.value > 1.0) {
      schema("audio RMS must be within [0, 1]");
    }
    batch.features.push_back(std::move(out));
  }
  return batch;
}

json to_json(const FeatureBatch& batch) {
  json list = json::array();
  for (const auto& f : batch.features) {
    list.push_back({{"t", f.t}, {"kind", features::to_string(f.kind)}, {"value", f.value}});
  }
  return {{"device", batch.device}, {"features", std::move(list)}};
}

SightingBatch sighting_batch_from_json(const json& j) {
  only_keys(j, {"device", "sightings"}, "sighting batch");
  SightingBatch batch;
  batch.device = str(j, "device");
  for (const auto& s : array(j, "sightings")) {
    only_keys(s, {"t", "observer", "seen", "rssi"}, "sighting");
    social::ProximitySighting out;
    out.t = timestamp(s, "t");
    out.observer = str(s, "observer");
    out.seen = str(s, "seen");
    if (s.contains("rssi")) {
      if (!s["rssi"].is_number_integer()) schema("rssi must be an integer dBm");
      out.rssi = s["rssi"].get<int>();
    }
    if (out.observer != batch.device) {
      schema("sighting observer '" + out.observer + "' is not the posting device");
    }
    if (out.observer == out.seen) {
      throw Error(ErrorCode::SelfSighting, "device '" + out.observer + "' sighted itself");
    }
    batch.sightings.push_back(std::move(out));
  }
  return batch;
}

json to_json(const SightingBatch& batch) {
  json list = json::array();
  for (const auto& s : batch.sightings) {
    json item = {{"t", s.t}, {"observer", s.observer}, {"seen", s.seen}};
    if (s.rssi) item["rssi"] = *s.rssi;
    list.push_back(std::move(item));
  }
  return {{"device", batch.device}, {"sightings", std::move(list)}};
}

SelfReport selfreport_from_json(const json& j) {
  only_keys(j, {"child", "t", "emotion"}, "self-report");
  SelfReport r{str(j, "child"), timestamp(j, "t"), str(j, "emotion")};
  if (!is_known_emotion(r.emotion)) {
    throw Error(ErrorCode::UnknownEmotion, "emotion '" + r.emotion + "' is not in the catalog");
  }
  return r;
}

json to_json(const SelfReport& r) {
  return {{"child", r.child}, {"t", r.t}, {"emotion", r.emotion}};
}

AnnotationRequest annotation_from_json(const json& j) {
  only_keys(j, {"cue_key", "teacher", "text"}, "annotation");
  if (!j.contains("text") || !j["text"].is_string()) schema("annotation text must be a string");
  AnnotationRequest a{str(j, "cue_key"), str(j, "teacher"), j["text"].get<std::string>()};
  check_text(a.text);
  return a;
}

json to_json(const AnnotationRequest& a) {
  return {{"cue_key", a.cue_key}, {"teacher", a.teacher}, {"text", a.text}};
}

MessageRequest message_from_json(const json& j) {
  only_keys(j, {"child", "sender_role", "text"}, "message");
  MessageRequest m;
  m.child = str(j, "child");
  if (!j.contains("sender_role") || !j["sender_role"].is_string()) {
    throw Error(ErrorCode::BadRole, "sender_role must be teacher or parent");
  }
  auto role = role_from(j["sender_role"].get_ref<const std::string&>());
  if (!role || *role == Role::device) {
    throw Error(ErrorCode::BadRole, "sender_role must be teacher or parent");
  }
  m.sender_role = *role;
  if (!j.contains("text") || !j["text"].is_string()) schema("message text must be a string");
  m.text = j["text"].get<std::string>();
  check_text(m.text);
  return m;
}

json to_json(const MessageRequest& m) {
  return {{"child", m.child}, {"sender_role", to_string(m.sender_role)}, {"text", m.text}};
}

}  // namespace senseme::payloads
