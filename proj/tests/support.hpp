#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "json.hpp"
#include "senseme/derived_state.hpp"
#include "senseme/error.hpp"
#include "senseme/event_log.hpp"
#include "senseme/roster.hpp"
#include "senseme/schedule.hpp"
#include "senseme/service.hpp"
#include "senseme/time.hpp"

namespace testing {

namespace fs = std::filesystem;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = fs::temp_directory_path() /
            ("senseme-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

// Monday: math 09:00-10:00, break 10:00-10:30, art 10:30-11:30, break
// 11:30-12:00, gap, music 13:00-14:00. Tuesday..Friday only the morning.
// Times in UTC so expected timestamps are easy to write down.
inline const char* kSmallTimetable = R"({
  "timezone": "UTC",
  "days": {
    "mon": [
      {"window_id": "m1", "kind": "class", "class_id": "math", "start": "09:00", "end": "10:00"},
      {"window_id": "b1", "kind": "break", "start": "10:00", "end": "10:30"},
      {"window_id": "a1", "kind": "class", "class_id": "art", "start": "10:30", "end": "11:30"},
      {"window_id": "b2", "kind": "break", "start": "11:30", "end": "12:00"},
      {"window_id": "u1", "kind": "class", "class_id": "music", "start": "13:00", "end": "14:00"}
    ],
    "tue": [
      {"window_id": "m1", "kind": "class", "class_id": "math", "start": "09:00", "end": "10:00"},
      {"window_id": "b1", "kind": "break", "start": "10:00", "end": "10:30"}
    ],
    "wed": [
      {"window_id": "m1", "kind": "class", "class_id": "math", "start": "09:00", "end": "10:00"},
      {"window_id": "b1", "kind": "break", "start": "10:00", "end": "10:30"}
    ],
    "thu": [
      {"window_id": "m1", "kind": "class", "class_id": "math", "start": "09:00", "end": "10:00"},
      {"window_id": "b1", "kind": "break", "start": "10:00", "end": "10:30"}
    ],
    "fri": [
      {"window_id": "m1", "kind": "class", "class_id": "math", "start": "09:00", "end": "10:00"},
      {"window_id": "b1", "kind": "break", "start": "10:00", "end": "10:30"}
    ]
  }
})";

// 2024-03-04 is a Monday.
inline constexpr senseme::Timestamp kMonday = 1709510400;  // 2024-03-04T00:00:00Z
inline senseme::Timestamp at(int day_offset, int hh, int mm, int ss = 0) {
  return kMonday + day_offset * 86400 + hh * 3600 + mm * 60 + ss;
}

inline senseme::Roster small_roster() {
  return senseme::Roster("Test School", {{"c1", "d1", "5A"},
                                         {"c2", "d2", "5A"},
                                         {"c3", "d3", "5A"},
                                         {"c4", "d4", "5A"}});
}

inline senseme::ServiceContext small_context(const std::string& overrides = "[]") {
  senseme::ServiceContext ctx;
  ctx.timetable = senseme::schedule::parse_timetable(kSmallTimetable);
  ctx.overrides = senseme::schedule::parse_overrides(overrides);
  ctx.roster = small_roster();
  return ctx;
}

inline senseme::Tokens small_tokens() { return {"dev-tok", "teach-tok", "par-tok"}; }

inline json feature_body(const std::string& device, const std::string& kind,
                         std::initializer_list<std::pair<senseme::Timestamp, double>> points) {
  json features = json::array();
  for (const auto& [t, v] : points) features.push_back({{"t", t}, {"kind", kind}, {"value", v}});
  return {{"device", device}, {"features", features}};
}

// Folds hand-made records straight into a DerivedState.
struct StateBuilder {
  senseme::DerivedState state;
  std::vector<senseme::EventRecord> records;

  void add(senseme::EventType type, json payload, senseme::Timestamp t_recv = 0) {
    senseme::EventRecord r{state.head_seq() + 1, t_recv, type, std::move(payload)};
    state.apply(r);
    records.push_back(std::move(r));
  }
  void features(const std::string& device, const std::string& kind, senseme::Timestamp from,
                senseme::Timestamp to, double value) {
    json fs = json::array();
    for (auto t = from; t < to; ++t) fs.push_back({{"t", t}, {"kind", kind}, {"value", value}});
    add(senseme::EventType::features, {{"device", device}, {"features", fs}}, to);
  }
  void sighting(const std::string& observer, const std::string& seen, senseme::Timestamp t) {
    add(senseme::EventType::proximity,
        {{"device", observer},
         {"sightings", json::array({{{"t", t}, {"observer", observer}, {"seen", seen}}})}},
        t);
  }
};

}  // namespace testing
