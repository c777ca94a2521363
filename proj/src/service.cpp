#include "senseme/service.hpp"

#include <chrono>
#include <mutex>

#include "senseme/error.hpp"
#include "senseme/payloads.hpp"
#include "senseme/privacy.hpp"
#include "senseme/social.hpp"

namespace senseme {

using nlohmann::json;

ServiceContext load_context(const std::string& timetable_path, const std::string& roster_path,
                            const std::string& overrides_path) {
  ServiceContext ctx;
  ctx.timetable = schedule::parse_timetable(read_file(timetable_path));
  ctx.roster = parse_roster(read_file(roster_path));
  if (!overrides_path.empty()) ctx.overrides = schedule::parse_overrides(read_file(overrides_path));
  return ctx;
}

namespace queries {

namespace {

void require_child(const ServiceContext& ctx, std::string_view child) {
  if (!ctx.roster.has_child(child)) {
    throw Error(ErrorCode::UnknownChild, "unknown child '" + std::string(child) + "'");
  }
}

std::string_view emotion_label(std::string_view id) {
  for (const auto& e : kEmotionCatalog) {
    if (e.id == id) return e.label;
  }
  return {};
}

}  // namespace

json cues(const ServiceContext& ctx, const DerivedState& state, std::string_view child, Date date) {
  require_child(ctx, child);
  json list = json::array();
  for (const auto& cue : aggregation::assemble_cues(state, ctx.cue_context(), child, date)) {
    list.push_back(aggregation::to_json(cue));
  }
  return {{"child", child}, {"date", format_date(date)}, {"cues", std::move(list)}};
}

json graph(const ServiceContext& ctx, const DerivedState& state, Date date) {
  return social::to_json(social::daily_graph(state.copresence(), date, ctx.timetable.tz,
                                             ctx.roster.device_to_child()));
}

json messages(const ServiceContext& ctx, const DerivedState& state, std::string_view child,
              std::optional<std::uint64_t> since) {
  require_child(ctx, child);
  auto thread = state.messages(child);
  json list = json::array();
  for (std::size_t i = 0; i < thread.size(); ++i) {
    const auto& m = thread[i];
    if (since && m.seq <= *since) continue;
    // a reply from the other side means this one was seen
    bool read = false;
    for (std::size_t k = i + 1; k < thread.size() && !read; ++k) {
      read = thread[k].sender_role != m.sender_role;
    }
    list.push_back({{"id", m.id},
                    {"seq", m.seq},
                    {"child", m.child},
                    {"sender_role", to_string(m.sender_role)},
                    {"text", m.text},
                    {"t", m.t},
                    {"read", read}});
  }
  return {{"child", child}, {"messages", std::move(list)}};
}

schedule::LocationLabel location_label(const ServiceContext& ctx, const DerivedState& state,
                                       std::string_view child, Timestamp at) {
  const DeviceData* dev = state.device(ctx.roster.device_of(child));
  std::optional<Timestamp> last_seen;
  if (dev) last_seen = dev->last_seen_at_or_before(at);
  return schedule::obfuscate_location(ctx.timetable, ctx.overrides, last_seen, at);
}

json location(const ServiceContext& ctx, const DerivedState& state, std::string_view child,
              Timestamp at) {
  require_child(ctx, child);
  return {{"child", child}, {"at", at}, {"label", schedule::to_string(location_label(ctx, state, child, at))}};
}

json selfreports(const ServiceContext& ctx, const DerivedState& state, std::string_view child,
                 Date date) {
  require_child(ctx, child);
  json list = json::array();
  for (const auto& r : state.selfreports(child)) {
    if (local_date(r.t, ctx.timetable.tz) != date) continue;
    list.push_back({{"seq", r.seq}, {"t", r.t}, {"emotion", r.emotion},
                    {"label", emotion_label(r.emotion)}});
  }
  return {{"child", child}, {"date", format_date(date)}, {"reports", std::move(list)}};
}

json meta(const ServiceContext& ctx) {
  json emotions = json::array();
  for (const auto& e : kEmotionCatalog) emotions.push_back({{"id", e.id}, {"label", e.label}});
  return {{"school", ctx.roster.school()}, {"emotions", std::move(emotions)}, {"api", "v1"}};
}

}  // namespace queries

DerivedState replay(const std::filesystem::path& log_path, std::optional<std::uint64_t> max_seq) {
  DerivedState state;
  read_log(log_path, [&](const EventRecord& r) { state.apply(r); }, max_seq);
  return state;
}

AwarenessService::AwarenessService(ServiceContext ctx, std::filesystem::path log_path,
                                   ServiceOptions options)
    : ctx_(std::move(ctx)), path_(std::move(log_path)), options_(std::move(options)) {
  state_ = replay(path_);
  writer_ = std::make_unique<LogWriter>(path_, options_.sync);
}

Timestamp AwarenessService::now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::uint64_t AwarenessService::head_seq() const {
  std::shared_lock lock(mu_);
  return state_.head_seq();
}

Ack AwarenessService::append(EventType type, json payload, std::string id_prefix) {
  std::unique_lock lock(mu_);
  EventRecord record{state_.head_seq() + 1, now(), type, std::move(payload)};
  writer_->append(record);
  state_.apply(record);
  Ack ack{record.seq, {}};
  if (!id_prefix.empty()) ack.id = id_prefix + std::to_string(record.seq);
  return ack;
}

Ack AwarenessService::ingest_features(const json& body) {
  privacy::require_clean(body);
  auto batch = payloads::feature_batch_from_json(body);
  if (!ctx_.roster.has_device(batch.device)) {
    throw Error(ErrorCode::UnknownDevice, "unknown device '" + batch.device + "'");
  }
  return append(EventType::features, payloads::to_json(batch));
}

Ack AwarenessService::ingest_proximity(const json& body) {
  privacy::require_clean(body);
  auto batch = payloads::sighting_batch_from_json(body);
  if (!ctx_.roster.has_device(batch.device)) {
    throw Error(ErrorCode::UnknownDevice, "unknown device '" + batch.device + "'");
  }
  for (const auto& s : batch.sightings) {
    if (!ctx_.roster.has_device(s.seen)) {
      throw Error(ErrorCode::UnknownDevice, "sighted device '" + s.seen + "' is not registered");
    }
  }
  return append(EventType::proximity, payloads::to_json(batch));
}

Ack AwarenessService::submit_selfreport(const json& body) {
  privacy::require_clean(body);
  auto report = payloads::selfreport_from_json(body);
  if (!ctx_.roster.has_child(report.child)) {
    throw Error(ErrorCode::UnknownChild, "unknown child '" + report.child + "'");
  }
  return append(EventType::selfreport, payloads::to_json(report));
}

Ack AwarenessService::annotate_cue(std::string_view cue_key, const json& body) {
  privacy::require_clean(body);
  if (!body.is_object() || body.contains("cue_key")) {
    throw Error(ErrorCode::SchemaError, "annotation body must be {\"teacher\", \"text\"}");
  }
  json full = body;
  full["cue_key"] = cue_key;
  auto request = payloads::annotation_from_json(full);
  auto key = aggregation::CueKey::parse(cue_key);
  if (!key || !aggregation::cue_exists(ctx_.cue_context(), *key)) {
    throw Error(ErrorCode::CueNotFound, "no cue '" + std::string(cue_key) + "'");
  }
  return append(EventType::annotation, payloads::to_json(request), "a");
}

Ack AwarenessService::post_message(const json& body) {
  privacy::require_clean(body);
  auto request = payloads::message_from_json(body);
  if (!ctx_.roster.has_child(request.child)) {
    throw Error(ErrorCode::UnknownChild, "unknown child '" + request.child + "'");
  }
  return append(EventType::message, payloads::to_json(request), "m");
}

json AwarenessService::get_cues(std::string_view child, std::string_view date) const {
  Date day = require_date(date);
  std::shared_lock lock(mu_);
  return queries::cues(ctx_, state_, child, day);
}

json AwarenessService::get_graph(std::string_view date) const {
  Date day = require_date(date);
  std::shared_lock lock(mu_);
  return queries::graph(ctx_, state_, day);
}

json AwarenessService::get_messages(std::string_view child,
                                    std::optional<std::uint64_t> since) const {
  std::shared_lock lock(mu_);
  return queries::messages(ctx_, state_, child, since);
}

json AwarenessService::get_location(std::string_view child, Timestamp at) const {
  std::shared_lock lock(mu_);
  return queries::location(ctx_, state_, child, at);
}

json AwarenessService::get_selfreports(std::string_view child, std::string_view date) const {
  Date day = require_date(date);
  std::shared_lock lock(mu_);
  return queries::selfreports(ctx_, state_, child, day);
}

}  // namespace senseme
