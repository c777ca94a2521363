#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "senseme/aggregation.hpp"
#include "senseme/event_log.hpp"
#include "senseme/roster.hpp"
#include "senseme/social.hpp"

namespace senseme {

// Per-second values of one sensor kind for one device, sorted by t with one
// point per second. A later upsert for the same second replaces the value, so
// folding events in seq order gives last-writer-wins.
class TimeSeries {
 public:
  void upsert(Timestamp t, double value);

  std::span<const aggregation::SeriesPoint> points() const { return points_; }
  std::optional<Timestamp> last_at_or_before(Timestamp t) const;
  bool any_in(Timestamp from, Timestamp to) const;
  std::size_t size() const { return points_.size(); }

 private:
  std::vector<aggregation::SeriesPoint> points_;
};

struct DeviceData {
  TimeSeries motion;
  TimeSeries audio;
  std::vector<Timestamp> sightings;  // times this device reported a scan hit, sorted

  std::optional<Timestamp> last_seen_at_or_before(Timestamp t) const;
  bool active_in(Timestamp from, Timestamp to) const;
};

struct StoredSelfReport {
  std::uint64_t seq = 0;
  std::string child;
  Timestamp t = 0;
  std::string emotion;
};

struct Annotation {
  std::string id;
  std::uint64_t seq = 0;
  std::string cue_key;
  std::string teacher;
  std::string text;
  Timestamp t = 0;
};

struct Message {
  std::string id;
  std::uint64_t seq = 0;
  std::string child;
  Role sender_role = Role::teacher;
  std::string text;
  Timestamp t = 0;
};

// Everything queries need, folded from the event log one record at a time.
// Holds no wall-clock or randomness: two folds of the same prefix are equal.
class DerivedState {
 public:
  // Throws Error when the record's payload does not match its type's schema
  // or the seq does not follow head_seq().
  void apply(const EventRecord& record);

  std::uint64_t head_seq() const { return head_; }

  const DeviceData* device(std::string_view id) const;
  const social::CoPresenceSet& copresence() const { return copresence_; }
  std::vector<StoredSelfReport> selfreports(std::string_view child) const;
  std::vector<Annotation> annotations(std::string_view cue_key) const;
  // Thread for a child ordered by (t, seq).
  std::span<const Message> messages(std::string_view child) const;

 private:
  std::uint64_t head_ = 0;
  std::map<std::string, DeviceData, std::less<>> devices_;
  social::CoPresenceSet copresence_;
  std::map<std::string, std::vector<StoredSelfReport>, std::less<>> selfreports_;
  std::map<std::string, std::vector<Annotation>, std::less<>> annotations_;
  std::map<std::string, std::vector<Message>, std::less<>> messages_;
};

}  // namespace senseme
