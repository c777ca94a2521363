#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "senseme/features.hpp"
#include "senseme/schedule.hpp"
#include "senseme/time.hpp"

namespace senseme::aggregation {

enum class IndexKind { physical, verbal, social };

std::string_view to_string(IndexKind kind);
std::optional<IndexKind> index_kind_from(std::string_view text);

struct Config {
  double voicing_threshold = 0.05;  // audio RMS at or above counts as voiced
  int min_history = 3;              // windows needed before a baseline exists
  double band = 0.25;               // typical when ratio is within 1 +/- band
  double low_coverage = 0.5;        // cues below this are flagged
  int history_days = 7;
};

// One per-second scalar of a single sensor kind, as stored per device.
struct SeriesPoint {
  Timestamp t = 0;
  double value = 0.0;
};

struct ActivityIndex {
  std::string child;
  Date date;
  std::string window_id;
  std::string class_id;  // verbal only
  IndexKind kind = IndexKind::physical;
  std::optional<double> value;  // set iff coverage > 0
  double coverage = 0.0;
};

// Which history an index is compared against: breaks pool together, classes
// match on class_id, the social index is daily.
struct BaselineKey {
  IndexKind kind = IndexKind::physical;
  std::string class_id;

  friend bool operator==(const BaselineKey&, const BaselineKey&) = default;
};

BaselineKey key_for(const ActivityIndex& index);

struct Baseline {
  BaselineKey key;
  double mean = 0.0;
  int n = 0;
  Date as_of;
};

enum class Level { below, typical, above, no_baseline };

std::string_view to_string(Level level);

struct DeviationLevel {
  Level level = Level::no_baseline;
  // nullopt when undefined, +inf when the baseline mean is 0 and v > 0.
  std::optional<double> ratio;
};

// Index over `points` (sorted by t, one per second) for a window. Only points
// in [w.start, w.end) count. Physical is the mean motion count; verbal is the
// fraction of seconds with RMS >= voicing_threshold.
// Throws Error{KindMismatch} for physical over a class window or verbal over a
// break, and for the social kind (computed by the social module).
ActivityIndex index_from_points(std::span<const SeriesPoint> points,
                                const schedule::WindowInstance& w, IndexKind kind,
                                const Config& config = {});

// Same contract over raw features: filters to the matching sensor kind and,
// for a repeated second, keeps the last feature in sequence order.
ActivityIndex compute_index(std::span<const features::SecondFeature> features,
                            const schedule::WindowInstance& w, IndexKind kind,
                            const Config& config = {});

// Mean of defined values matching `key` dated within
// [as_of - history_days, as_of - 1]; nullopt below min_history contributors.
std::optional<Baseline> baseline_for(std::span<const ActivityIndex> history,
                                     const BaselineKey& key, Date as_of,
                                     const Config& config = {});

DeviationLevel deviation_level(std::optional<double> value, const std::optional<Baseline>& baseline,
                               const Config& config = {});

}  // namespace senseme::aggregation
