#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "senseme/features.hpp"
#include "senseme/roster.hpp"
#include "senseme/social.hpp"

// Wire schemas shared by the HTTP bodies and the event-log payloads. Parsing
// is strict: unknown keys, wrong types and out-of-range values are
// Error{SchemaError}. Forbidden-key screening is separate (privacy.hpp) and
// must run first.
namespace senseme::payloads {

inline constexpr std::size_t kMaxTextLength = 2000;  // code points

struct FeatureBatch {
  std::string device;
  std::vector<features::SecondFeature> features;
};

struct SightingBatch {
  std::string device;
  std::vector<social::ProximitySighting> sightings;
};

struct SelfReport {
  std::string child;
  Timestamp t = 0;
  std::string emotion;
};

struct AnnotationRequest {
  std::string cue_key;
  std::string teacher;
  std::string text;
};

struct MessageRequest {
  std::string child;
  Role sender_role = Role::teacher;
  std::string text;
};

// features: non-empty; value finite and >= 0, audio <= 1.
FeatureBatch feature_batch_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FeatureBatch& batch);

// sightings: non-empty; every observer is the posting device.
// Throws Error{SelfSighting} when observer == seen.
SightingBatch sighting_batch_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SightingBatch& batch);

// Throws Error{UnknownEmotion} for ids outside the catalog.
SelfReport selfreport_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SelfReport& report);

// Throws Error{EmptyText} for blank text.
AnnotationRequest annotation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AnnotationRequest& request);

// Throws Error{BadRole} unless sender_role is teacher or parent.
MessageRequest message_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MessageRequest& request);

// Validates text length in code points; EmptyText for blank input.
void check_text(const std::string& text);

}  // namespace senseme::payloads
