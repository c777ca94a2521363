#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "senseme/aggregation.hpp"
#include "senseme/features.hpp"
#include "senseme/rng.hpp"
#include "senseme/schedule.hpp"

// Deterministic school simulator: synthesizes raw motion/audio signals,
// reduces them through the real feature-extraction kernels, adds Bluetooth
// sightings and self-reports, and posts the resulting batches to the service.
namespace senseme::sim {

struct ChildProfile {
  std::string child;
  std::string device;
  double activity_level = 0.5;  // mean per-second motion count during breaks
  double talkativeness = 0.5;   // probability a class second is voiced
  std::string cluster;          // friendship group
};

// JSON array of {"child", "device", "activity_level", "talkativeness", "cluster"}.
std::vector<ChildProfile> parse_profiles(std::string_view document);

struct AnomalySpec {
  std::string child;
  Date date;
  aggregation::IndexKind kind = aggregation::IndexKind::verbal;
  double factor = 1.0;
};

// "child=ID,date=YYYY-MM-DD,kind=verbal,factor=0"
AnomalySpec parse_anomaly(std::string_view text);

// Parameters actually used for one child on one date.
struct DayParams {
  std::string child;
  double activity_level = 0.0;
  double talkativeness = 0.0;
  double social_factor = 1.0;  // scales every meeting probability of the child
};

// Profile parameters for `date` with every spec dated `date` applied
// multiplicatively (verbal -> talkativeness, physical -> activity level,
// social -> meeting probability). Throws Error{UnknownChild}.
std::vector<DayParams> inject_anomaly(std::span<const AnomalySpec> specs,
                                      std::span<const ChildProfile> profiles, Date date);

inline constexpr double kToneHz = 200.0;

// Motion count c ~ Exp(activity_level), emitted as (0, 0, 1 + c) so that
// motion_count() gives c back. c is capped so the sample stays in range.
features::AccelSample synthesize_motion(Timestamp t, double activity_level, SplitMix64& rng);

// One second of audio. With probability `talkativeness` a 200 Hz tone of
// amplitude A ~ U[0.1, 0.9] (RMS A/sqrt(2)), otherwise silence.
class AudioSynth {
 public:
  explicit AudioSynth(int sample_rate = features::kDefaultSampleRate);

  void fill(features::AudioFrame& frame, Timestamp t, double talkativeness,
            SplitMix64& rng) const;
  void fill_tone(features::AudioFrame& frame, Timestamp t, double amplitude) const;
  int sample_rate() const { return sample_rate_; }

 private:
  int sample_rate_;
  std::vector<double> unit_tone_;
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::vector<ChildProfile> children;
  int days = 10;  // school days, i.e. dates with at least one effective window
  Date start{2024, 3, 4};
  schedule::Timetable timetable;
  schedule::Overrides overrides;
  std::vector<AnomalySpec> anomalies;
  double p_meet = 0.8;   // same cluster, per break epoch
  double p_cross = 0.05; // different clusters, per break epoch
  double p_seat = 0.3;   // same cluster, per class epoch
  int sample_rate = features::kDefaultSampleRate;
  int upload_seconds = 300;  // max seconds of features per batch

  std::string server_url;
  std::string token;
  double compress = 0.0;  // sim seconds per wall second; 0 posts without pausing
  std::filesystem::path dry_run_dir;
};

// One request the simulator would send.
struct Batch {
  Timestamp upload_t = 0;  // simulated time the device sends it
  std::string path;        // API path, e.g. /api/v1/ingest/features
  std::string device;
  nlohmann::json body;
};

// School dates the run covers, starting at config.start.
std::vector<Date> school_days(const SimConfig& config);

// Every batch for `date`, sorted by (upload_t, path, device). Deterministic
// in (config, date): each child, pair and day draws from its own stream.
std::vector<Batch> generate_day(const SimConfig& config, Date date);

// Dry-run line: {"path": ..., "body": ...}
std::string dry_run_line(const Batch& batch);

struct RunSummary {
  std::size_t batches = 0;
  std::size_t features = 0;
  std::size_t sightings = 0;
  std::size_t selfreports = 0;
  std::size_t rejects = 0;
};

// Posts (or with dry_run_dir set, writes to <dir>/batches.ndjson) every batch
// in upload order. Returns 0 on full success, 1 if any request was rejected,
// 2 on connection failure. Progress and diagnostics go to `log`.
int run(const SimConfig& config, std::ostream& log, RunSummary* summary = nullptr);

}  // namespace senseme::sim
