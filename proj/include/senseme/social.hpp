#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/time/time.h"
#include "json.hpp"
#include "senseme/schedule.hpp"
#include "senseme/time.hpp"

// Bluetooth sightings -> per-epoch co-presence -> daily graphs and a daily
// break-time social index.
namespace senseme::social {

inline constexpr Timestamp kEpochSeconds = 300;

struct ProximitySighting {
  Timestamp t = 0;
  std::string observer;
  std::string seen;
  std::optional<int> rssi;  // dBm; stored, not used for thresholds

  friend bool operator==(const ProximitySighting&, const ProximitySighting&) = default;
};

// Unordered pair of ids, canonicalized so that a < b.
struct DevicePair {
  std::string a;
  std::string b;

  static DevicePair of(std::string_view x, std::string_view y);
  bool involves(std::string_view id) const { return a == id || b == id; }
  const std::string& other(std::string_view id) const { return a == id ? b : a; }

  friend auto operator<=>(const DevicePair&, const DevicePair&) = default;
};

struct CoPresence {
  std::int64_t epoch = 0;
  DevicePair pair;

  // epoch-major so a day is a contiguous range
  friend auto operator<=>(const CoPresence&, const CoPresence&) = default;
};

using CoPresenceSet = std::set<CoPresence>;

// floor(t / epoch_seconds); epoch_seconds must be positive.
std::int64_t epoch_of(Timestamp t, Timestamp epoch_seconds = kEpochSeconds);

// A pair is co-present in an epoch when either device saw the other at least
// once during it.
CoPresenceSet co_presence(std::span<const ProximitySighting> sightings,
                          Timestamp epoch_seconds = kEpochSeconds);

// Records whose epoch starts inside [from, to).
std::vector<CoPresence> epochs_between(const CoPresenceSet& copresence, Timestamp from,
                                       Timestamp to, Timestamp epoch_seconds = kEpochSeconds);

using DeviceToChild = std::map<std::string, std::string, std::less<>>;

struct ProximityGraph {
  Date date;
  std::vector<std::string> nodes;                        // sorted child ids
  std::map<std::pair<std::string, std::string>, double> edges;  // (a < b) -> minutes

  double weight(std::string_view x, std::string_view y) const;
  double total_weight() const;
};

// Edge weight = (epoch_seconds / 60) x co-present epochs of the pair starting
// on the local date. Throws Error{UnknownDevice} for a device missing from
// `device_to_child`.
ProximityGraph daily_graph(const CoPresenceSet& copresence, Date date, const absl::TimeZone& tz,
                           const DeviceToChild& device_to_child,
                           Timestamp epoch_seconds = kEpochSeconds);

nlohmann::json to_json(const ProximityGraph& graph);

struct SocialIndex {
  std::string child;
  Date date;
  int distinct_peers = 0;
  double copresence_minutes = 0.0;
};

bool epoch_overlaps(std::int64_t epoch, const schedule::WindowInstance& w,
                    Timestamp epoch_seconds = kEpochSeconds);

// Distinct peers sharing at least one co-present epoch that overlaps a break,
// and the minutes those epochs add up to. Devices missing from the mapping
// are ignored.
SocialIndex social_index(const CoPresenceSet& copresence, std::string_view child,
                         std::span<const schedule::WindowInstance> breaks, Date date,
                         const DeviceToChild& device_to_child,
                         Timestamp epoch_seconds = kEpochSeconds);

}  // namespace senseme::social
