#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "senseme/aggregation.hpp"
#include "senseme/derived_state.hpp"
#include "senseme/roster.hpp"
#include "senseme/schedule.hpp"
#include "senseme/social.hpp"

namespace senseme::aggregation {

inline constexpr std::string_view kSocialWindowId = "social-day";

// "<child>:<YYYY-MM-DD>:<window_id>:<kind>"
struct CueKey {
  std::string child;
  Date date;
  std::string window_id;
  IndexKind kind = IndexKind::physical;

  std::string str() const;
  static std::optional<CueKey> parse(std::string_view text);
  friend bool operator==(const CueKey&, const CueKey&) = default;
};

struct AwarenessCue {
  CueKey key;
  ActivityIndex index;
  Timestamp start = 0;
  Timestamp end = 0;
  std::optional<Baseline> baseline;
  DeviationLevel deviation;
  schedule::LocationLabel location = schedule::LocationLabel::away;
  bool low_confidence = false;
  std::vector<Annotation> annotations;
  std::optional<social::SocialIndex> social;  // social cue only
};

// Immutable deployment configuration the cue builder reads.
struct CueContext {
  const schedule::Timetable& timetable;
  const schedule::Overrides& overrides;
  const Roster& roster;
  const Config& config;
};

// Indices for every effective window of `date` plus the day's social index,
// in window order with the social index last.
std::vector<ActivityIndex> day_indices(const DerivedState& state, const CueContext& ctx,
                                       std::string_view child, Date date);

// Social index of a day as an ActivityIndex: value is distinct break-time
// peers; coverage is the share of break epochs in which the child's device
// produced any data.
ActivityIndex social_activity_index(const DerivedState& state, const CueContext& ctx,
                                    std::string_view child, Date date,
                                    social::SocialIndex* detail = nullptr);

// One physical cue per effective break, one verbal cue per effective class,
// then the daily social cue. Pure in (state, ctx, child, date).
// Throws Error{UnknownChild}.
std::vector<AwarenessCue> assemble_cues(const DerivedState& state, const CueContext& ctx,
                                        std::string_view child, Date date);

// Whether the key names a cue assemble_cues would produce.
bool cue_exists(const CueContext& ctx, const CueKey& key);

nlohmann::json to_json(const AwarenessCue& cue);

}  // namespace senseme::aggregation
