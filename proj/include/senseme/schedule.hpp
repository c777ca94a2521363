#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/time/time.h"
#include "json.hpp"
#include "senseme/time.hpp"

namespace senseme::schedule {

enum class WindowKind { class_period, break_period };

std::string_view to_string(WindowKind kind);

// One recurring slot of the school day. Times are minutes since local
// midnight; 1440 ("24:00") is allowed as an end.
struct ScheduleWindow {
  std::string window_id;
  WindowKind kind = WindowKind::class_period;
  std::string class_id;  // empty for breaks
  int start = 0;
  int end = 0;

  friend bool operator==(const ScheduleWindow&, const ScheduleWindow&) = default;
};

struct Timetable {
  std::string timezone;
  absl::TimeZone tz;
  // Indexed by days since Monday; each list sorted by start, non-overlapping.
  std::array<std::vector<ScheduleWindow>, 7> days;
};

struct ScheduleOverride {
  Date date;
  std::set<std::string> cancelled;
  std::optional<std::vector<ScheduleWindow>> replacements;
};

using Overrides = std::map<Date, ScheduleOverride>;

struct WindowInstance {
  Date date;
  std::string window_id;
  WindowKind kind = WindowKind::class_period;
  std::string class_id;
  Timestamp start = 0;  // inclusive
  Timestamp end = 0;    // exclusive

  bool contains(Timestamp t) const { return start <= t && t < end; }
  friend bool operator==(const WindowInstance&, const WindowInstance&) = default;
};

enum class LocationLabel { in_class, on_break, at_school, away };

std::string_view to_string(LocationLabel label);

inline constexpr Timestamp kStalenessSeconds = 900;

// Throws Error{SchemaError, OverlapError, InvertedWindow, UnknownZone}.
Timetable parse_timetable(std::string_view document);
Timetable timetable_from_json(const nlohmann::json& doc);

// Overrides file: JSON array of {"date", "cancel": [...]} / {"date", "replace": [...]}.
// Several entries for one date merge; two replacements for one date are a
// SchemaError.
Overrides parse_overrides(std::string_view document);
Overrides overrides_from_json(const nlohmann::json& doc);

// Validates and sorts one day's windows in place.
void validate_day(std::vector<ScheduleWindow>& windows);

int day_index(Date date);

// Effective windows for `date` after applying any override, sorted by start.
std::vector<WindowInstance> windows_for_day(const Timetable& tt, const Overrides& overrides,
                                            Date date);

// The window whose [start, end) contains t on t's local date.
std::optional<WindowInstance> resolve_window(const Timetable& tt, const Overrides& overrides,
                                             Timestamp t);

LocationLabel obfuscate_location(const Timetable& tt, const Overrides& overrides,
                                 std::optional<Timestamp> last_seen, Timestamp at);

}  // namespace senseme::schedule
