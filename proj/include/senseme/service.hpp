#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "json.hpp"
#include "senseme/aggregation.hpp"
#include "senseme/cues.hpp"
#include "senseme/derived_state.hpp"
#include "senseme/event_log.hpp"
#include "senseme/roster.hpp"
#include "senseme/schedule.hpp"

namespace senseme {

// Deployment configuration, fixed for the lifetime of a service.
struct ServiceContext {
  schedule::Timetable timetable;
  schedule::Overrides overrides;
  Roster roster;
  aggregation::Config config;

  aggregation::CueContext cue_context() const {
    return {timetable, overrides, roster, config};
  }
};

// Loads timetable, roster and (optionally) overrides files.
ServiceContext load_context(const std::string& timetable_path, const std::string& roster_path,
                            const std::string& overrides_path = {});

// Read-side queries. All are pure functions of (context, state) and return
// the exact documents the HTTP API serves.
namespace queries {

nlohmann::json cues(const ServiceContext& ctx, const DerivedState& state, std::string_view child,
                    Date date);
nlohmann::json graph(const ServiceContext& ctx, const DerivedState& state, Date date);
nlohmann::json messages(const ServiceContext& ctx, const DerivedState& state,
                        std::string_view child, std::optional<std::uint64_t> since);
nlohmann::json location(const ServiceContext& ctx, const DerivedState& state,
                        std::string_view child, Timestamp at);
nlohmann::json selfreports(const ServiceContext& ctx, const DerivedState& state,
                           std::string_view child, Date date);
nlohmann::json meta(const ServiceContext& ctx);

schedule::LocationLabel location_label(const ServiceContext& ctx, const DerivedState& state,
                                       std::string_view child, Timestamp at);

}  // namespace queries

// Folds a log file (optionally only its first `max_seq` records) into derived
// state. Throws CorruptLog.
DerivedState replay(const std::filesystem::path& log_path,
                    std::optional<std::uint64_t> max_seq = std::nullopt);

struct ServiceOptions {
  bool sync = true;  // fdatasync every append
  std::function<Timestamp()> clock;  // defaults to the system clock
};

struct Ack {
  std::uint64_t seq = 0;
  std::string id;  // annotations and messages only
};

// Event-sourced awareness service. Every write is validated, appended to the
// log as one record and folded into the derived state under one exclusive
// lock, so queries (shared lock) only ever see whole log prefixes.
class AwarenessService {
 public:
  // Replays any existing log at `log_path` before accepting writes.
  AwarenessService(ServiceContext ctx, std::filesystem::path log_path, ServiceOptions options = {});

  // Bodies are the JSON documents the HTTP API accepts. All writes screen for
  // forbidden keys first (PrivacyViolation), then the schema, then the roster.
  Ack ingest_features(const nlohmann::json& body);
  Ack ingest_proximity(const nlohmann::json& body);
  Ack submit_selfreport(const nlohmann::json& body);
  // body: {"teacher": ..., "text": ...}; throws CueNotFound / EmptyText.
  Ack annotate_cue(std::string_view cue_key, const nlohmann::json& body);
  Ack post_message(const nlohmann::json& body);

  nlohmann::json get_cues(std::string_view child, std::string_view date) const;
  nlohmann::json get_graph(std::string_view date) const;
  nlohmann::json get_messages(std::string_view child, std::optional<std::uint64_t> since) const;
  nlohmann::json get_location(std::string_view child, Timestamp at) const;
  nlohmann::json get_selfreports(std::string_view child, std::string_view date) const;
  nlohmann::json meta() const { return queries::meta(ctx_); }

  std::uint64_t head_seq() const;
  const ServiceContext& context() const { return ctx_; }
  const std::filesystem::path& log_path() const { return path_; }

  // Runs `fn` against a consistent snapshot of the derived state.
  template <typename Fn>
  auto with_state(Fn&& fn) const {
    std::shared_lock lock(mu_);
    return fn(state_);
  }

 private:
  Ack append(EventType type, nlohmann::json payload, std::string id_prefix = {});
  Timestamp now() const;

  ServiceContext ctx_;
  std::filesystem::path path_;
  ServiceOptions options_;
  DerivedState state_;
  std::unique_ptr<LogWriter> writer_;
  mutable std::shared_mutex mu_;
};

}  // namespace senseme
