#include "senseme/cues.hpp"

#include <cmath>
#include <set>

#include "senseme/error.hpp"

namespace senseme::aggregation {

using nlohmann::json;
using schedule::WindowInstance;
using schedule::WindowKind;

std::string CueKey::str() const {
  return child + ":" + format_date(date) + ":" + window_id + ":" + std::string(to_string(kind));
}

std::optional<CueKey> CueKey::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t from = 0;
  for (;;) {
    auto pos = text.find(':', from);
    parts.push_back(text.substr(from, pos == std::string_view::npos ? pos : pos - from));
    if (pos == std::string_view::npos) break;
    from = pos + 1;
  }
  if (parts.size() != 4 || parts[0].empty() || parts[2].empty()) return std::nullopt;
  auto date = parse_date(parts[1]);
  auto kind = index_kind_from(parts[3]);
  if (!date || !kind) return std::nullopt;
  return CueKey{std::string(parts[0]), *date, std::string(parts[2]), *kind};
}

namespace {

const DeviceData* device_for(const DerivedState& state, const CueContext& ctx,
                             std::string_view child) {
  return state.device(ctx.roster.device_of(child));
}

ActivityIndex window_index(const DeviceData* dev, const WindowInstance& w, std::string_view child,
                           const Config& config) {
  const bool is_break = w.kind == WindowKind::break_period;
  std::span<const SeriesPoint> points;
  if (dev) points = is_break ? dev->motion.points() : dev->audio.points();
  auto idx = index_from_points(points, w, is_break ? IndexKind::physical : IndexKind::verbal,
                               config);
  idx.child = std::string(child);
  return idx;
}

schedule::LocationLabel location_at(const DeviceData* dev, const CueContext& ctx, Timestamp at) {
  std::optional<Timestamp> last_seen;
  if (dev) last_seen = dev->last_seen_at_or_before(at);
  return schedule::obfuscate_location(ctx.timetable, ctx.overrides, last_seen, at);
}

}  // namespace

ActivityIndex social_activity_index(const DerivedState& state, const CueContext& ctx,
                                    std::string_view child, Date date,
                                    social::SocialIndex* detail) {
  const DeviceData* dev = device_for(state, ctx, child);
  std::vector<WindowInstance> breaks;
  for (auto& w : schedule::windows_for_day(ctx.timetable, ctx.overrides, date)) {
    if (w.kind == WindowKind::break_period) breaks.push_back(std::move(w));
  }

  auto si = social::social_index(state.copresence(), child, breaks, date,
                                 ctx.roster.device_to_child());

  // break epochs, and those in which the device showed any sign of life
  const Timestamp E = social::kEpochSeconds;
  std::set<std::int64_t> epochs;
  std::set<std::int64_t> active;
  for (const auto& b : breaks) {
    for (auto k = social::epoch_of(b.start); k * E < b.end; ++k) {
      epochs.insert(k);
      if (dev && dev->active_in(std::max(k * E, b.start), std::min(k * E + E, b.end))) {
        active.insert(k);
      }
    }
  }

  ActivityIndex idx;
  idx.child = std::string(child);
  idx.date = date;
  idx.window_id = std::string(kSocialWindowId);
  idx.kind = IndexKind::social;
  if (!epochs.empty()) {
    idx.coverage = static_cast<double>(active.size()) / static_cast<double>(epochs.size());
  }
  if (idx.coverage > 0.0) idx.value = static_cast<double>(si.distinct_peers);
  if (detail) *detail = si;
  return idx;
}

std::vector<ActivityIndex> day_indices(const DerivedState& state, const CueContext& ctx,
                                       std::string_view child, Date date) {
  const DeviceData* dev = device_for(state, ctx, child);
  std::vector<ActivityIndex> out;
  for (const auto& w : schedule::windows_for_day(ctx.timetable, ctx.overrides, date)) {
    out.push_back(window_index(dev, w, child, ctx.config));
  }
  out.push_back(social_activity_index(state, ctx, child, date));
  return out;
}

std::vector<AwarenessCue> assemble_cues(const DerivedState& state, const CueContext& ctx,
                                        std::string_view child, Date date) {
  const DeviceData* dev = device_for(state, ctx, child);

  std::vector<ActivityIndex> history;
  for (int back = ctx.config.history_days; back >= 1; --back) {
    auto day = day_indices(state, ctx, child, date - back);
    history.insert(history.end(), std::make_move_iterator(day.begin()),
                   std::make_move_iterator(day.end()));
  }

  auto finish = [&](AwarenessCue& cue) {
    cue.baseline = baseline_for(history, key_for(cue.index), date, ctx.config);
    cue.deviation = deviation_level(cue.index.value, cue.baseline, ctx.config);
    cue.low_confidence = cue.index.coverage < ctx.config.low_coverage;
    cue.annotations = state.annotations(cue.key.str());
  };

  std::vector<AwarenessCue> cues;
  const auto windows = schedule::windows_for_day(ctx.timetable, ctx.overrides, date);
  for (const auto& w : windows) {
    AwarenessCue cue;
    cue.index = window_index(dev, w, child, ctx.config);
    cue.key = {std::string(child), date, w.window_id, cue.index.kind};
    cue.start = w.start;
    cue.end = w.end;
    cue.location = location_at(dev, ctx, w.start);
    finish(cue);
    cues.push_back(std::move(cue));
  }

  AwarenessCue social;
  social::SocialIndex detail;
  social.index = social_activity_index(state, ctx, child, date, &detail);
  social.social = detail;
  social.key = {std::string(child), date, std::string(kSocialWindowId), IndexKind::social};
  social.start = day_start(date, ctx.timetable.tz);
  social.end = day_start(date + 1, ctx.timetable.tz);
  social.location = windows.empty() ? schedule::LocationLabel::away
                                    : location_at(dev, ctx, windows.front().start);
  finish(social);
  cues.push_back(std::move(social));
  return cues;
}

bool cue_exists(const CueContext& ctx, const CueKey& key) {
  if (!ctx.roster.has_child(key.child)) return false;
  if (key.kind == IndexKind::social) return key.window_id == kSocialWindowId;
  const auto wanted =
      key.kind == IndexKind::physical ? WindowKind::break_period : WindowKind::class_period;
  for (const auto& w : schedule::windows_for_day(ctx.timetable, ctx.overrides, key.date)) {
    if (w.window_id == key.window_id) return w.kind == wanted;
  }
  return false;
}

json to_json(const AwarenessCue& cue) {
  json j;
  j["cue_key"] = cue.key.str();
  j["child"] = cue.key.child;
  j["date"] = format_date(cue.key.date);
  j["window_id"] = cue.key.window_id;
  j["kind"] = to_string(cue.key.kind);
  if (cue.key.kind == IndexKind::verbal) j["class_id"] = cue.index.class_id;
  j["start"] = cue.start;
  j["end"] = cue.end;
  j["index"] = {{"value", cue.index.value ? json(*cue.index.value) : json(nullptr)},
                {"coverage", cue.index.coverage}};
  if (cue.baseline) {
    j["baseline"] = {{"mean", cue.baseline->mean},
                     {"n", cue.baseline->n},
                     {"as_of", format_date(cue.baseline->as_of)}};
  } else {
    j["baseline"] = nullptr;
  }
  json ratio = nullptr;
  if (cue.deviation.ratio) {
    ratio = std::isinf(*cue.deviation.ratio) ? json("unbounded") : json(*cue.deviation.ratio);
  }
  j["deviation"] = {{"level", to_string(cue.deviation.level)}, {"ratio", ratio}};
  j["low_confidence"] = cue.low_confidence;
  j["location"] = schedule::to_string(cue.location);
  json notes = json::array();
  for (const auto& a : cue.annotations) {
    notes.push_back(
        {{"id", a.id}, {"seq", a.seq}, {"teacher", a.teacher}, {"text", a.text}, {"t", a.t}});
  }
  j["annotations"] = std::move(notes);
  if (cue.social) {
    j["social"] = {{"distinct_peers", cue.social->distinct_peers},
                   {"copresence_minutes", cue.social->copresence_minutes}};
  }
  return j;
}

}  // namespace senseme::aggregation
