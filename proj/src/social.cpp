#include "senseme/social.hpp"

#include <algorithm>

#include "senseme/error.hpp"

namespace senseme::social {

DevicePair DevicePair::of(std::string_view x, std::string_view y) {
  if (y < x) std::swap(x, y);
  return {std::string(x), std::string(y)};
}

std::int64_t epoch_of(Timestamp t, Timestamp epoch_seconds) {
  return floor_div(t, epoch_seconds);
}

CoPresenceSet co_presence(std::span<const ProximitySighting> sightings, Timestamp epoch_seconds) {
  CoPresenceSet out;
  for (const auto& s : sightings) {
    out.insert({epoch_of(s.t, epoch_seconds), DevicePair::of(s.observer, s.seen)});
  }
  return out;
}

std::vector<CoPresence> epochs_between(const CoPresenceSet& copresence, Timestamp from,
                                       Timestamp to, Timestamp epoch_seconds) {
  // first epoch starting at or after `from`, first starting at or after `to`
  const std::int64_t lo = floor_div(from + epoch_seconds - 1, epoch_seconds);
  const std::int64_t hi = floor_div(to + epoch_seconds - 1, epoch_seconds);
  auto first = copresence.lower_bound(CoPresence{lo, {}});
  auto last = copresence.lower_bound(CoPresence{hi, {}});
  return {first, last};
}

double ProximityGraph::weight(std::string_view x, std::string_view y) const {
  auto pair = DevicePair::of(x, y);
  auto it = edges.find({pair.a, pair.b});
  return it == edges.end() ? 0.0 : it->second;
}

double ProximityGraph::total_weight() const {
  double total = 0.0;
  for (const auto& [_, w] : edges) total += w;
  return total;
}

ProximityGraph daily_graph(const CoPresenceSet& copresence, Date date, const absl::TimeZone& tz,
                           const DeviceToChild& device_to_child, Timestamp epoch_seconds) {
  ProximityGraph graph;
  graph.date = date;
  std::set<std::string> nodes;
  for (const auto& [_, child] : device_to_child) nodes.insert(child);
  graph.nodes.assign(nodes.begin(), nodes.end());

  const double minutes_per_epoch = static_cast<double>(epoch_seconds) / 60.0;
  auto child_of = [&](const std::string& device) -> const std::string& {
    auto it = device_to_child.find(device);
    if (it == device_to_child.end()) {
      throw Error(ErrorCode::UnknownDevice, "device '" + device + "' is not registered");
    }
    return it->second;
  };
  for (const auto& rec :
       epochs_between(copresence, day_start(date, tz), day_start(date + 1, tz), epoch_seconds)) {
    const auto& ca = child_of(rec.pair.a);
    const auto& cb = child_of(rec.pair.b);
    if (ca == cb) continue;
    auto pair = DevicePair::of(ca, cb);
    graph.edges[{pair.a, pair.b}] += minutes_per_epoch;
  }
  return graph;
}

nlohmann::json to_json(const ProximityGraph& graph) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [pair, minutes] : graph.edges) {
    edges.push_back({{"a", pair.first}, {"b", pair.second}, {"minutes", minutes}});
  }
  return {{"date", format_date(graph.date)}, {"nodes", graph.nodes}, {"edges", edges}};
}

bool epoch_overlaps(std::int64_t epoch, const schedule::WindowInstance& w,
                    Timestamp epoch_seconds) {
  const Timestamp start = epoch * epoch_seconds;
  return start < w.end && start + epoch_seconds > w.start;
}

SocialIndex social_index(const CoPresenceSet& copresence, std::string_view child,
                         std::span<const schedule::WindowInstance> breaks, Date date,
                         const DeviceToChild& device_to_child, Timestamp epoch_seconds) {
  SocialIndex index{std::string(child), date, 0, 0.0};
  if (breaks.empty()) return index;

  auto lookup = [&](const std::string& device) -> const std::string* {
    auto it = device_to_child.find(device);
    return it == device_to_child.end() ? nullptr : &it->second;
  };

  Timestamp from = breaks.front().start;
  Timestamp to = breaks.front().end;
  for (const auto& b : breaks) {
    from = std::min(from, b.start);
    to = std::max(to, b.end);
  }

  std::set<std::string> peers;
  std::size_t epochs = 0;
  // an epoch may start up to one epoch before the first break begins
  for (const auto& rec : epochs_between(copresence, from - epoch_seconds + 1, to, epoch_seconds)) {
    const bool in_break = std::any_of(breaks.begin(), breaks.end(), [&](const auto& b) {
      return epoch_overlaps(rec.epoch, b, epoch_seconds);
    });
    if (!in_break) continue;
    const std::string* ca = lookup(rec.pair.a);
    const std::string* cb = lookup(rec.pair.b);
    if (!ca || !cb || *ca == *cb) continue;
    if (*ca == child) {
      peers.insert(*cb);
    } else if (*cb == child) {
      peers.insert(*ca);
    } else {
      continue;
    }
    ++epochs;
  }
  index.distinct_peers = static_cast<int>(peers.size());
  index.copresence_minutes =
      static_cast<double>(epochs) * static_cast<double>(epoch_seconds) / 60.0;
  return index;
}

}  // namespace senseme::social
