#include "senseme/schedule.hpp"

#include <algorithm>
#include <charconv>

#include "senseme/error.hpp"

namespace senseme::schedule {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 7> kDayKeys = {"mon", "tue", "wed", "thu",
                                                       "fri", "sat", "sun"};

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

bool valid_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.';
  });
}

// "HH:MM" -> minutes since midnight; 24:00 is accepted.
int parse_clock(const json& value, std::string_view field) {
  if (!value.is_string()) schema(std::string(field) + " must be a \"HH:MM\" string");
  const auto& s = value.get_ref<const std::string&>();
  int h = -1;
  int m = -1;
  if (s.size() == 5 && s[2] == ':') {
    auto r1 = std::from_chars(s.data(), s.data() + 2, h);
    auto r2 = std::from_chars(s.data() + 3, s.data() + 5, m);
    if (r1.ptr != s.data() + 2 || r2.ptr != s.data() + 5) h = -1;
  }
  if (h < 0 || h > 24 || m < 0 || m > 59 || (h == 24 && m != 0)) {
    schema("bad clock time '" + s + "' for " + std::string(field));
  }
  return h * 60 + m;
}

ScheduleWindow window_from_json(const json& j) {
  if (!j.is_object()) schema("window must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "window_id" && key != "kind" && key != "class_id" && key != "start" &&
        key != "end") {
      schema("unknown window field '" + key + "'");
    }
  }
  ScheduleWindow w;
  if (!j.contains("window_id") || !j["window_id"].is_string()) schema("window_id missing");
  w.window_id = j["window_id"].get<std::string>();
  if (!valid_id(w.window_id)) schema("bad window_id '" + w.window_id + "'");
  if (!j.contains("kind") || !j["kind"].is_string()) schema("window kind missing");
  const auto& kind = j["kind"].get_ref<const std::string&>();
  if (kind == "class") {
    w.kind = WindowKind::class_period;
    if (!j.contains("class_id") || !j["class_id"].is_string()) {
      schema("class window '" + w.window_id + "' needs class_id");
    }
    w.class_id = j["class_id"].get<std::string>();
    if (!valid_id(w.class_id)) schema("bad class_id '" + w.class_id + "'");
  } else if (kind == "break") {
    w.kind = WindowKind::break_period;
    if (j.contains("class_id")) schema("break window '" + w.window_id + "' has class_id");
  } else {
    schema("unknown window kind '" + kind + "'");
  }
  if (!j.contains("start") || !j.contains("end")) schema("window start/end missing");
  w.start = parse_clock(j["start"], "start");
  w.end = parse_clock(j["end"], "end");
  if (w.end <= w.start) {
    throw Error(ErrorCode::InvertedWindow,
                "window '" + w.window_id + "' ends at or before its start");
  }
  return w;
}

std::vector<ScheduleWindow> day_from_json(const json& j) {
  if (!j.is_array()) schema("day must be an array of windows");
  std::vector<ScheduleWindow> windows;
  for (const auto& w : j) windows.push_back(window_from_json(w));
  validate_day(windows);
  return windows;
}

json parse_document(std::string_view document) {
  try {
    return json::parse(document);
  } catch (const json::parse_error& e) {
    schema(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string_view to_string(WindowKind kind) {
  return kind == WindowKind::class_period ? "class" : "break";
}

std::string_view to_string(LocationLabel label) {
  switch (label) {
    case LocationLabel::in_class: return "in class";
    case LocationLabel::on_break: return "on break";
    case LocationLabel::at_school: return "at school";
    case LocationLabel::away: return "away";
  }
  return "away";
}

void validate_day(std::vector<ScheduleWindow>& windows) {
  for (const auto& w : windows) {
    if (w.end <= w.start) {
      throw Error(ErrorCode::InvertedWindow,
                  "window '" + w.window_id + "' ends at or before its start");
    }
  }
  std::sort(windows.begin(), windows.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  std::set<std::string> ids;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (!ids.insert(windows[i].window_id).second) {
      schema("duplicate window_id '" + windows[i].window_id + "' within one day");
    }
    if (i > 0 && windows[i].start < windows[i - 1].end) {
      throw Error(ErrorCode::OverlapError, "windows '" + windows[i - 1].window_id + "' and '" +
                                               windows[i].window_id + "' overlap");
    }
  }
}

Timetable timetable_from_json(const json& doc) {
  if (!doc.is_object()) schema("timetable must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "timezone" && key != "days") schema("unknown timetable field '" + key + "'");
  }
  if (!doc.contains("timezone") || !doc["timezone"].is_string()) schema("timezone missing");
  Timetable tt;
  tt.timezone = doc["timezone"].get<std::string>();
  if (!absl::LoadTimeZone(tt.timezone, &tt.tz)) {
    throw Error(ErrorCode::UnknownZone, "unknown time zone '" + tt.timezone + "'");
  }
  if (!doc.contains("days") || !doc["days"].is_object()) schema("days missing");
  for (const auto& [key, day] : doc["days"].items()) {
    auto it = std::find(kDayKeys.begin(), kDayKeys.end(), key);
    if (it == kDayKeys.end()) schema("unknown day key '" + key + "'");
    tt.days[static_cast<std::size_t>(it - kDayKeys.begin())] = day_from_json(day);
  }
  return tt;
}

Timetable parse_timetable(std::string_view document) {
  return timetable_from_json(parse_document(document));
}

Overrides overrides_from_json(const json& doc) {
  if (!doc.is_array()) schema("overrides must be an array");
  Overrides out;
  for (const auto& entry : doc) {
    if (!entry.is_object()) schema("override must be an object");
    for (const auto& [key, _] : entry.items()) {
      if (key != "date" && key != "cancel" && key != "replace") {
        schema("unknown override field '" + key + "'");
      }
    }
    if (!entry.contains("date") || !entry["date"].is_string()) schema("override date missing");
    Date date = require_date(entry["date"].get<std::string>());
    auto& ov = out[date];
    ov.date = date;
    if (entry.contains("cancel")) {
      if (!entry["cancel"].is_array()) schema("cancel must be an array of window ids");
      for (const auto& id : entry["cancel"]) {
        if (!id.is_string()) schema("cancel must be an array of window ids");
        ov.cancelled.insert(id.get<std::string>());
      }
    }
    if (entry.contains("replace")) {
      if (ov.replacements) schema("two replacements for " + format_date(date));
      ov.replacements = day_from_json(entry["replace"]);
    }
  }
  return out;
}

Overrides parse_overrides(std::string_view document) {
  return overrides_from_json(parse_document(document));
}

int day_index(Date date) { return static_cast<int>(absl::GetWeekday(date)); }

std::vector<WindowInstance> windows_for_day(const Timetable& tt, const Overrides& overrides,
                                            Date date) {
  const std::vector<ScheduleWindow>* base = &tt.days[static_cast<std::size_t>(day_index(date))];
  const ScheduleOverride* ov = nullptr;
  if (auto it = overrides.find(date); it != overrides.end()) {
    ov = &it->second;
    if (ov->replacements) base = &*ov->replacements;
  }
  std::vector<WindowInstance> out;
  out.reserve(base->size());
  for (const auto& w : *base) {
    if (ov && ov->cancelled.count(w.window_id)) continue;
    out.push_back({date, w.window_id, w.kind, w.class_id, local_minute(date, w.start, tt.tz),
                   local_minute(date, w.end, tt.tz)});
  }
  return out;
}

std::optional<WindowInstance> resolve_window(const Timetable& tt, const Overrides& overrides,
                                             Timestamp t) {
  for (auto& inst : windows_for_day(tt, overrides, local_date(t, tt.tz))) {
    if (inst.contains(t)) return std::move(inst);
  }
  return std::nullopt;
}

LocationLabel obfuscate_location(const Timetable& tt, const Overrides& overrides,
                                 std::optional<Timestamp> last_seen, Timestamp at) {
  if (!last_seen || at - *last_seen > kStalenessSeconds) return LocationLabel::away;
  auto windows = windows_for_day(tt, overrides, local_date(at, tt.tz));
  for (const auto& w : windows) {
    if (w.contains(at)) {
      return w.kind == WindowKind::class_period ? LocationLabel::in_class
                                                : LocationLabel::on_break;
    }
  }
  if (!windows.empty() && windows.front().start <= at && at <= windows.back().end) {
    return LocationLabel::at_school;
  }
  return LocationLabel::away;
}

}  // namespace senseme::schedule
