#include "senseme/aggregation.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <vector>

#include "senseme/error.hpp"

namespace senseme::aggregation {

using schedule::WindowKind;

std::string_view to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::physical: return "physical";
    case IndexKind::verbal: return "verbal";
    case IndexKind::social: return "social";
  }
  return "physical";
}

std::optional<IndexKind> index_kind_from(std::string_view text) {
  if (text == "physical") return IndexKind::physical;
  if (text == "verbal") return IndexKind::verbal;
  if (text == "social") return IndexKind::social;
  return std::nullopt;
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::below: return "below";
    case Level::typical: return "typical";
    case Level::above: return "above";
    case Level::no_baseline: return "no_baseline";
  }
  return "no_baseline";
}

BaselineKey key_for(const ActivityIndex& index) {
  return {index.kind, index.kind == IndexKind::verbal ? index.class_id : std::string{}};
}

ActivityIndex index_from_points(std::span<const SeriesPoint> points,
                                const schedule::WindowInstance& w, IndexKind kind,
                                const Config& config) {
  const bool ok = (kind == IndexKind::physical && w.kind == WindowKind::break_period) ||
                  (kind == IndexKind::verbal && w.kind == WindowKind::class_period);
  if (!ok) {
    throw Error(ErrorCode::KindMismatch, std::string(to_string(kind)) + " index over " +
                                             std::string(schedule::to_string(w.kind)) +
                                             " window '" + w.window_id + "'");
  }

  auto first = std::lower_bound(points.begin(), points.end(), w.start,
                                [](const SeriesPoint& p, Timestamp t) { return p.t < t; });
  auto last = std::lower_bound(first, points.end(), w.end,
                               [](const SeriesPoint& p, Timestamp t) { return p.t < t; });

  std::size_t n = 0;
  double acc = 0.0;
  for (auto it = first; it != last; ++it) {
    ++n;
    if (kind == IndexKind::physical) {
      acc += it->value;
    } else if (it->value >= config.voicing_threshold) {
      acc += 1.0;
    }
  }

  ActivityIndex index;
  index.date = w.date;
  index.window_id = w.window_id;
  index.class_id = w.class_id;
  index.kind = kind;
  index.coverage = static_cast<double>(n) / static_cast<double>(w.end - w.start);
  if (n > 0) index.value = acc / static_cast<double>(n);
  return index;
}

ActivityIndex compute_index(std::span<const features::SecondFeature> features,
                            const schedule::WindowInstance& w, IndexKind kind,
                            const Config& config) {
  const auto sensor =
      kind == IndexKind::physical ? features::SensorKind::motion : features::SensorKind::audio;
  std::map<Timestamp, double> by_second;
  for (const auto& f : features) {
    if (f.kind == sensor) by_second[f.t] = f.value;
  }
  std::vector<SeriesPoint> points;
  points.reserve(by_second.size());
  for (const auto& [t, v] : by_second) points.push_back({t, v});
  return index_from_points(points, w, kind, config);
}

std::optional<Baseline> baseline_for(std::span<const ActivityIndex> history,
                                     const BaselineKey& key, Date as_of, const Config& config) {
  const Date from = as_of - config.history_days;
  double sum = 0.0;
  int n = 0;
  for (const auto& idx : history) {
    if (!idx.value || idx.date < from || idx.date >= as_of) continue;
    if (key_for(idx) != key) continue;
    sum += *idx.value;
    ++n;
  }
  if (n < config.min_history || n == 0) return std::nullopt;
  return Baseline{key, sum / static_cast<double>(n), n, as_of};
}

DeviationLevel deviation_level(std::optional<double> value, const std::optional<Baseline>& baseline,
                               const Config& config) {
  if (!value || !baseline) return {Level::no_baseline, std::nullopt};
  if (baseline->mean <= 0.0) {
    if (*value <= 0.0) return {Level::typical, 1.0};
    return {Level::above, std::numeric_limits<double>::infinity()};
  }
  const double r = *value / baseline->mean;
  if (r < 1.0 - config.band) return {Level::below, r};
  if (r > 1.0 + config.band) return {Level::above, r};
  return {Level::typical, r};
}

}  // namespace senseme::aggregation
