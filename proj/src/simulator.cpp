#include "senseme/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <thread>

#include "httplib.h"
#include "senseme/error.hpp"
#include "senseme/kernels.hpp"
#include "senseme/payloads.hpp"
#include "senseme/roster.hpp"

namespace senseme::sim {

using nlohmann::json;
using schedule::WindowInstance;
using schedule::WindowKind;

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

// Stream tags so each purpose draws from its own sequence.
enum Stream : std::uint64_t { kMotion = 1, kAudio = 2, kReport = 3, kProximity = 4 };

constexpr std::size_t kFrameChunk = 256;
constexpr double kMaxMotionCount = 15.0;
constexpr std::string_view kFeaturesPath = "/api/v1/ingest/features";
constexpr std::string_view kProximityPath = "/api/v1/ingest/proximity";
constexpr std::string_view kSelfReportPath = "/api/v1/selfreport";

std::uint64_t day_key(Date date) { return static_cast<std::uint64_t>(date - Date(1970, 1, 1)); }

void emit_features(std::vector<Batch>& out, const std::string& device,
                   std::vector<features::SecondFeature>& feats, int upload_seconds) {
  const auto chunk = static_cast<std::size_t>(std::max(1, upload_seconds));
  for (std::size_t from = 0; from < feats.size(); from += chunk) {
    const std::size_t to = std::min(feats.size(), from + chunk);
    payloads::FeatureBatch batch{device, {feats.begin() + static_cast<std::ptrdiff_t>(from),
                                          feats.begin() + static_cast<std::ptrdiff_t>(to)}};
    out.push_back({feats[to - 1].t + 1, std::string(kFeaturesPath), device,
                   payloads::to_json(batch)});
  }
  feats.clear();
}

void synth_break(const WindowInstance& w, const DayParams& params, SplitMix64& rng,
                 const std::string& device, std::vector<features::SecondFeature>& feats) {
  std::vector<features::AccelSample> samples;
  samples.reserve(static_cast<std::size_t>(w.end - w.start));
  for (Timestamp t = w.start; t < w.end; ++t) {
    samples.push_back(synthesize_motion(t, params.activity_level, rng));
  }
  std::vector<double> counts(samples.size());
  kernels::omp::motion_counts(samples, counts);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    feats.push_back({device, samples[i].t, features::SensorKind::motion, counts[i]});
  }
}

void synth_class(const WindowInstance& w, const DayParams& params, SplitMix64& rng,
                 const AudioSynth& synth, std::vector<features::AudioFrame>& frames,
                 const std::string& device, std::vector<features::SecondFeature>& feats) {
  std::vector<double> rms(kFrameChunk);
  for (Timestamp t0 = w.start; t0 < w.end; t0 += static_cast<Timestamp>(kFrameChunk)) {
    const auto n = static_cast<std::size_t>(std::min<Timestamp>(kFrameChunk, w.end - t0));
    for (std::size_t i = 0; i < n; ++i) {
      synth.fill(frames[i], t0 + static_cast<Timestamp>(i), params.talkativeness, rng);
    }
    std::span<const features::AudioFrame> batch(frames.data(), n);
    kernels::omp::frame_rms(batch, std::span<double>(rms.data(), n));
    for (std::size_t i = 0; i < n; ++i) {
      feats.push_back({device, frames[i].t, features::SensorKind::audio, rms[i]});
    }
  }
}

struct EpochSlot {
  std::int64_t epoch;
  bool is_break;
  std::size_t window;  // index into the day's windows
  Timestamp from;
  Timestamp to;
};

std::vector<EpochSlot> epoch_slots(const std::vector<WindowInstance>& windows) {
  std::vector<EpochSlot> slots;
  const Timestamp E = social::kEpochSeconds;
  for (auto k = social::epoch_of(windows.front().start); k * E < windows.back().end; ++k) {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (!social::epoch_overlaps(k, windows[i])) continue;
      if (windows[i].kind == WindowKind::break_period) {
        hit = i;
        break;
      }
      if (!hit) hit = i;
    }
    if (!hit) continue;
    const auto& w = windows[*hit];
    slots.push_back({k, w.kind == WindowKind::break_period, *hit, std::max(k * E, w.start),
                     std::min(k * E + E, w.end)});
  }
  return slots;
}

}  // namespace

std::vector<ChildProfile> parse_profiles(std::string_view document) {
  auto doc = json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) schema("profiles must be a JSON array");
  std::vector<ChildProfile> out;
  for (const auto& p : doc) {
    if (!p.is_object()) schema("profile must be an object");
    ChildProfile c;
    try {
      c.child = p.at("child").get<std::string>();
      c.device = p.at("device").get<std::string>();
      c.activity_level = p.at("activity_level").get<double>();
      c.talkativeness = p.at("talkativeness").get<double>();
      c.cluster = p.value("cluster", std::string{});
    } catch (const json::exception& e) {
      schema(std::string("bad profile: ") + e.what());
    }
    if (c.child.empty() || c.device.empty()) schema("profile needs child and device");
    if (!(c.activity_level >= 0.0) || !std::isfinite(c.activity_level)) {
      schema("activity_level must be >= 0 for " + c.child);
    }
    if (!(c.talkativeness >= 0.0 && c.talkativeness <= 1.0)) {
      schema("talkativeness must be within [0, 1] for " + c.child);
    }
    out.push_back(std::move(c));
  }
  return out;
}

AnomalySpec parse_anomaly(std::string_view text) {
  AnomalySpec spec;
  bool have_child = false, have_date = false, have_kind = false, have_factor = false;
  std::size_t from = 0;
  while (from <= text.size()) {
    auto comma = text.find(',', from);
    auto item = text.substr(from, comma == std::string_view::npos ? comma : comma - from);
    auto eq = item.find('=');
    if (eq == std::string_view::npos) schema("anomaly item '" + std::string(item) + "' lacks '='");
    auto key = item.substr(0, eq);
    auto value = std::string(item.substr(eq + 1));
    if (key == "child") {
      spec.child = value;
      have_child = !value.empty();
    } else if (key == "date") {
      spec.date = require_date(value);
      have_date = true;
    } else if (key == "kind") {
      auto kind = aggregation::index_kind_from(value);
      if (!kind) schema("anomaly kind must be verbal, physical or social");
      spec.kind = *kind;
      have_kind = true;
    } else if (key == "factor") {
      std::size_t used = 0;
      try {
        spec.factor = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != value.size() || !(spec.factor >= 0.0)) schema("anomaly factor must be >= 0");
      have_factor = true;
    } else {
      schema("unknown anomaly key '" + std::string(key) + "'");
    }
    if (comma == std::string_view::npos) break;
    from = comma + 1;
  }
  if (!have_child || !have_date || !have_kind || !have_factor) {
    schema("anomaly needs child, date, kind and factor");
  }
  return spec;
}

std::vector<DayParams> inject_anomaly(std::span<const AnomalySpec> specs,
                                      std::span<const ChildProfile> profiles, Date date) {
  std::vector<DayParams> params;
  params.reserve(profiles.size());
  for (const auto& p : profiles) params.push_back({p.child, p.activity_level, p.talkativeness, 1.0});
  for (const auto& spec : specs) {
    auto it = std::find_if(params.begin(), params.end(),
                           [&](const DayParams& d) { return d.child == spec.child; });
    if (it == params.end()) {
      throw Error(ErrorCode::UnknownChild, "anomaly names unknown child '" + spec.child + "'");
    }
    if (spec.date != date) continue;
    switch (spec.kind) {
      case aggregation::IndexKind::verbal:
        it->talkativeness = std::min(1.0, it->talkativeness * spec.factor);
        break;
      case aggregation::IndexKind::physical: it->activity_level *= spec.factor; break;
      case aggregation::IndexKind::social: it->social_factor *= spec.factor; break;
    }
  }
  return params;
}

features::AccelSample synthesize_motion(Timestamp t, double activity_level, SplitMix64& rng) {
  double c = activity_level > 0.0 ? rng.exponential(activity_level) : 0.0;
  c = std::min(c, kMaxMotionCount);
  return {t, 0.0, 0.0, 1.0 + c};
}

AudioSynth::AudioSynth(int sample_rate) : sample_rate_(sample_rate) {
  // 200 whole cycles per frame; above Nyquist the closed-form RMS no longer holds
  if (sample_rate <= 2 * static_cast<int>(kToneHz)) {
    schema("sample rate must exceed " + std::to_string(2 * static_cast<int>(kToneHz)) + " Hz");
  }
  unit_tone_.resize(static_cast<std::size_t>(sample_rate));
  for (std::size_t i = 0; i < unit_tone_.size(); ++i) {
    unit_tone_[i] = std::sin(2.0 * std::numbers::pi * kToneHz * static_cast<double>(i) /
                             static_cast<double>(sample_rate));
  }
}

void AudioSynth::fill_tone(features::AudioFrame& frame, Timestamp t, double amplitude) const {
  frame.t = t;
  frame.samples.resize(unit_tone_.size());
  for (std::size_t i = 0; i < unit_tone_.size(); ++i) frame.samples[i] = amplitude * unit_tone_[i];
}

void AudioSynth::fill(features::AudioFrame& frame, Timestamp t, double talkativeness,
                      SplitMix64& rng) const {
  if (rng.bernoulli(talkativeness)) {
    fill_tone(frame, t, rng.uniform(0.1, 0.9));
  } else {
    frame.t = t;
    frame.samples.assign(unit_tone_.size(), 0.0);
  }
}

std::vector<Date> school_days(const SimConfig& config) {
  std::vector<Date> days;
  const int limit = config.days * 7 + 366;
  for (int i = 0; static_cast<int>(days.size()) < config.days && i < limit; ++i) {
    Date d = config.start + i;
    if (!schedule::windows_for_day(config.timetable, config.overrides, d).empty()) {
      days.push_back(d);
    }
  }
  return days;
}

std::vector<Batch> generate_day(const SimConfig& cfg, Date date) {
  const auto windows = schedule::windows_for_day(cfg.timetable, cfg.overrides, date);
  std::vector<Batch> out;
  if (windows.empty()) return out;

  const auto params = inject_anomaly(cfg.anomalies, cfg.children, date);
  const std::uint64_t day = day_key(date);
  AudioSynth synth(cfg.sample_rate);
  std::vector<features::AudioFrame> frames(kFrameChunk);
  std::vector<features::SecondFeature> feats;

  for (std::size_t i = 0; i < cfg.children.size(); ++i) {
    const auto& child = cfg.children[i];
    const std::uint64_t who = fnv1a(child.child);
    SplitMix64 motion_rng(mix_seed({cfg.seed, who, day, kMotion}));
    SplitMix64 audio_rng(mix_seed({cfg.seed, who, day, kAudio}));
    SplitMix64 report_rng(mix_seed({cfg.seed, who, day, kReport}));

    for (const auto& w : windows) {
      if (w.kind == WindowKind::break_period) {
        synth_break(w, params[i], motion_rng, child.device, feats);
      } else {
        synth_class(w, params[i], audio_rng, synth, frames, child.device, feats);
      }
      emit_features(out, child.device, feats, cfg.upload_seconds);
    }

    const Timestamp span = windows.back().end - windows.front().start;
    const Timestamp t =
        windows.front().start + static_cast<Timestamp>(report_rng.below(static_cast<std::uint64_t>(span)));
    const auto& emotion = kEmotionCatalog[report_rng.below(kEmotionCatalog.size())];
    payloads::SelfReport report{child.child, t, std::string(emotion.id)};
    out.push_back({t, std::string(kSelfReportPath), child.device, payloads::to_json(report)});
  }

  // Sightings, grouped per observer and window for upload at the window's end.
  const auto slots = epoch_slots(windows);
  std::map<std::pair<std::string, std::size_t>, std::vector<social::ProximitySighting>> scans;
  for (std::size_t i = 0; i < cfg.children.size(); ++i) {
    for (std::size_t j = i + 1; j < cfg.children.size(); ++j) {
      const auto& a = cfg.children[i];
      const auto& b = cfg.children[j];
      const bool same = !a.cluster.empty() && a.cluster == b.cluster;
      SplitMix64 rng(mix_seed({cfg.seed, fnv1a(a.child), fnv1a(b.child), day, kProximity}));
      const double scale = params[i].social_factor * params[j].social_factor;
      for (const auto& slot : slots) {
        double p = slot.is_break ? (same ? cfg.p_meet : cfg.p_cross) : (same ? cfg.p_seat : 0.0);
        p = std::clamp(p * scale, 0.0, 1.0);
        if (!rng.bernoulli(p)) continue;
        const auto direction = rng.below(3);  // a sees b, b sees a, both
        auto sight = [&](const ChildProfile& obs, const ChildProfile& seen) {
          const Timestamp t =
              slot.from + static_cast<Timestamp>(rng.below(static_cast<std::uint64_t>(slot.to - slot.from)));
          const int rssi = -50 - static_cast<int>(rng.below(40));
          scans[{obs.device, slot.window}].push_back({t, obs.device, seen.device, rssi});
        };
        if (direction != 1) sight(a, b);
        if (direction != 0) sight(b, a);
      }
    }
  }
  for (auto& [key, list] : scans) {
    std::stable_sort(list.begin(), list.end(), [](const auto& x, const auto& y) {
      return std::tie(x.t, x.seen) < std::tie(y.t, y.seen);
    });
    payloads::SightingBatch batch{key.first, std::move(list)};
    out.push_back({windows[key.second].end, std::string(kProximityPath), key.first,
                   payloads::to_json(batch)});
  }

  std::stable_sort(out.begin(), out.end(), [](const Batch& x, const Batch& y) {
    return std::tie(x.upload_t, x.path, x.device) < std::tie(y.upload_t, y.path, y.device);
  });
  return out;
}

std::string dry_run_line(const Batch& batch) {
  return json{{"path", batch.path}, {"body", batch.body}}.dump();
}

int run(const SimConfig& config, std::ostream& log, RunSummary* summary) {
  RunSummary s;
  std::ofstream dry;
  std::unique_ptr<httplib::Client> client;
  if (!config.dry_run_dir.empty()) {
    std::filesystem::create_directories(config.dry_run_dir);
    dry.open(config.dry_run_dir / "batches.ndjson", std::ios::binary | std::ios::trunc);
    if (!dry) {
      log << "cannot write " << (config.dry_run_dir / "batches.ndjson").string() << "\n";
      return 2;
    }
  } else {
    client = std::make_unique<httplib::Client>(config.server_url);
    if (!client->is_valid()) {
      log << "invalid server URL '" << config.server_url << "'\n";
      return 2;
    }
    client->set_bearer_token_auth(config.token);
    client->set_keep_alive(true);
    client->set_tcp_nodelay(true);
    client->set_connection_timeout(5);
    client->set_read_timeout(60);
  }

  std::optional<Timestamp> previous;
  for (Date date : school_days(config)) {
    for (const auto& batch : generate_day(config, date)) {
      if (config.compress > 0.0 && previous && batch.upload_t > *previous) {
        std::this_thread::sleep_for(std::chrono::duration<double>(
            static_cast<double>(batch.upload_t - *previous) / config.compress));
      }
      previous = batch.upload_t;

      if (dry.is_open()) {
        dry << dry_run_line(batch) << '\n';
      } else {
        auto res = client->Post(batch.path, batch.body.dump(), "application/json");
        if (!res) {
          log << "connection to " << config.server_url
              << " failed: " << httplib::to_string(res.error()) << "\n";
          if (summary) *summary = s;
          return 2;
        }
        if (res->status / 100 != 2) {
          ++s.rejects;
          log << "rejected " << batch.path << " from " << batch.device << ": HTTP " << res->status
              << " " << res->body << "\n";
        }
      }
      ++s.batches;
      if (batch.body.contains("features")) s.features += batch.body["features"].size();
      if (batch.body.contains("sightings")) s.sightings += batch.body["sightings"].size();
      if (batch.body.contains("emotion")) ++s.selfreports;
    }
  }
  log << (dry.is_open() ? "wrote " : "posted ") << s.batches << " batches (" << s.features << " features, " << s.sightings
      << " sightings, " << s.selfreports << " self-reports), " << s.rejects << " rejected\n";
  if (summary) *summary = s;
  return s.rejects == 0 ? 0 : 1;
}

}  // namespace senseme::sim
