#include <cmath>
#include <sstream>

#include <openssl/sha.h>

#include "doctest.h"
#include "senseme/aggregation.hpp"
#include "senseme/features.hpp"
#include "senseme/rng.hpp"
#include "senseme/simulator.hpp"
#include "senseme/social.hpp"
#include "code_of.hpp"
#include "support.hpp"

using namespace senseme;
using namespace senseme::sim;
using nlohmann::json;
using schedule::WindowKind;
using testing::code_of;

namespace {

const std::string kConfig = SENSEME_CONFIG_DIR;

SimConfig base_config(int children = 2, int days = 1) {
  SimConfig cfg;
  cfg.seed = 2024;
  cfg.timetable = schedule::parse_timetable(read_file(kConfig + "/timetable.json"));
  cfg.overrides = schedule::parse_overrides(read_file(kConfig + "/overrides.json"));
  auto all = parse_profiles(read_file(kConfig + "/profiles.json"));
  cfg.children.assign(all.begin(), all.begin() + children);
  cfg.days = days;
  cfg.sample_rate = 1000;
  return cfg;
}

std::string stream_of(const std::vector<Batch>& batches) {
  std::string out;
  for (const auto& b : batches) out += dry_run_line(b) + "\n";
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

struct Collected {
  std::vector<features::SecondFeature> features;
  std::vector<social::ProximitySighting> sightings;
  int selfreports = 0;
};

Collected collect(const std::vector<Batch>& batches) {
  Collected c;
  for (const auto& b : batches) {
    if (b.body.contains("features")) {
      for (const auto& f : b.body["features"]) {
        c.features.push_back({b.body["device"], f["t"].get<Timestamp>(),
                              features::sensor_kind_from(f["kind"].get<std::string>()),
                              f["value"].get<double>()});
      }
    } else if (b.body.contains("sightings")) {
      for (const auto& s : b.body["sightings"]) {
        c.sightings.push_back({s["t"].get<Timestamp>(), s["observer"], s["seen"], s["rssi"].get<int>()});
      }
    } else {
      ++c.selfreports;
    }
  }
  return c;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("rng stream is the documented SplitMix64") {
  // reference values of SplitMix64 seeded with 0
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
  SplitMix64 u(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(fnv1a("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a("a") == 0xAF63DC4C8601EC8CULL);
  CHECK(mix_seed({1, 2}) != mix_seed({2, 1}));
}

TEST_CASE("exponential draws have the requested mean") {
  SplitMix64 rng(3);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.exponential(0.4);
  CHECK(sum / n == doctest::Approx(0.4).epsilon(0.01));
}

TEST_CASE("synthesized signals invert through feature extraction") {
  CHECK(features::motion_count({0, 0.0, 0.0, 1.7}) == doctest::Approx(0.7).epsilon(1e-12));
  SplitMix64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    auto s = synthesize_motion(i, 0.5, rng);
    CHECK(s.ax == 0.0);
    CHECK(s.ay == 0.0);
    CHECK(s.az >= 1.0);
    CHECK(features::motion_count(s) == s.az - 1.0);
  }
  CHECK(features::motion_count(synthesize_motion(0, 0.0, rng)) == 0.0);

  AudioSynth synth;
  features::AudioFrame frame;
  synth.fill_tone(frame, 5, 0.5);
  CHECK(frame.samples.size() == 8000);
  CHECK(std::abs(features::audio_rms(frame) - 0.353553) <= 1e-6);

  synth.fill(frame, 6, 0.0, rng);
  CHECK(features::audio_rms(frame) == 0.0);
  for (int i = 0; i < 200; ++i) {
    synth.fill(frame, i, 1.0, rng);
    const double r = features::audio_rms(frame);
    CHECK(r >= 0.1 / std::sqrt(2.0) - 1e-9);
    CHECK(r <= 0.9 / std::sqrt(2.0) + 1e-9);
  }
  CHECK(code_of([] { AudioSynth bad(400); }) == ErrorCode::SchemaError);
}

TEST_CASE("same seed, same batches") {
  auto cfg = base_config(3);
  const Date day(2024, 3, 4);
  auto a = stream_of(generate_day(cfg, day));
  auto b = stream_of(generate_day(cfg, day));
  CHECK(a == b);
  CHECK(!a.empty());
  cfg.seed = 2025;
  CHECK(stream_of(generate_day(cfg, day)) != a);
}

TEST_CASE("features stay inside their windows") {
  auto cfg = base_config(3);
  const Date day(2024, 3, 4);
  auto got = collect(generate_day(cfg, day));
  auto windows = schedule::windows_for_day(cfg.timetable, cfg.overrides, day);
  Timestamp class_seconds = 0, break_seconds = 0;
  for (const auto& w : windows) {
    (w.kind == WindowKind::class_period ? class_seconds : break_seconds) += w.end - w.start;
  }
  std::size_t motion = 0, audio = 0;
  for (const auto& f : got.features) {
    auto w = schedule::resolve_window(cfg.timetable, cfg.overrides, f.t);
    REQUIRE(w);
    if (f.kind == features::SensorKind::motion) {
      CHECK(w->kind == WindowKind::break_period);
      ++motion;
    } else {
      CHECK(w->kind == WindowKind::class_period);
      ++audio;
    }
  }
  CHECK(motion == 3 * static_cast<std::size_t>(break_seconds));
  CHECK(audio == 3 * static_cast<std::size_t>(class_seconds));
  CHECK(got.selfreports == 3);
  for (const auto& s : got.sightings) CHECK(s.observer != s.seen);
}

TEST_CASE("a silent profile produces only unvoiced seconds") {
  auto cfg = base_config(2);
  cfg.children[0].talkativeness = 0.0;
  auto got = collect(generate_day(cfg, Date(2024, 3, 5)));
  std::size_t checked = 0;
  for (const auto& f : got.features) {
    if (f.device == cfg.children[0].device && f.kind == features::SensorKind::audio) {
      CHECK(f.value == 0.0);
      ++checked;
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("p_meet = 1 puts clustermates together in every break epoch") {
  auto cfg = base_config(2);  // c01 and c02 share a cluster
  REQUIRE(cfg.children[0].cluster == cfg.children[1].cluster);
  cfg.p_meet = 1.0;
  const Date day(2024, 3, 6);
  auto got = collect(generate_day(cfg, day));
  auto windows = schedule::windows_for_day(cfg.timetable, cfg.overrides, day);
  std::vector<schedule::WindowInstance> breaks;
  Timestamp break_minutes = 0;
  for (const auto& w : windows) {
    if (w.kind == WindowKind::break_period) {
      breaks.push_back(w);
      break_minutes += (w.end - w.start) / 60;
    }
  }
  std::size_t epochs = 0;
  for (const auto& c : social::co_presence(got.sightings)) {
    for (const auto& b : breaks) {
      if (social::epoch_overlaps(c.epoch, b)) {
        ++epochs;
        break;
      }
    }
  }
  CHECK(epochs == static_cast<std::size_t>(break_minutes / 5));
}

TEST_CASE("voiced fraction converges to talkativeness") {
  auto cfg = base_config(1);
  cfg.children[0].talkativeness = 0.45;
  double sum = 0.0;
  const int seeds = 5;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = 100 + s;
    auto got = collect(generate_day(cfg, Date(2024, 3, 4)));
    std::size_t voiced = 0, total = 0;
    for (const auto& f : got.features) {
      if (f.kind != features::SensorKind::audio) continue;
      ++total;
      voiced += f.value >= 0.05;
    }
    REQUIRE(total >= 1000);
    sum += static_cast<double>(voiced) / static_cast<double>(total);
  }
  CHECK(std::abs(sum / seeds - 0.45) <= 0.05);
}

TEST_CASE("a week of breaks recovers the activity level") {
  auto cfg = base_config(1, 5);
  cfg.children[0].activity_level = 0.8;
  double sum = 0.0;
  int windows = 0;
  for (Date day : school_days(cfg)) {
    auto got = collect(generate_day(cfg, day));
    for (const auto& w : schedule::windows_for_day(cfg.timetable, cfg.overrides, day)) {
      if (w.kind != WindowKind::break_period) continue;
      auto idx = aggregation::compute_index(got.features, w, aggregation::IndexKind::physical);
      REQUIRE(idx.value);
      CHECK(idx.coverage == 1.0);
      sum += *idx.value * static_cast<double>(w.end - w.start);
      windows += static_cast<int>(w.end - w.start);
    }
  }
  CHECK(std::abs(sum / windows - 0.8) <= 0.08);
}

TEST_CASE("anomaly injection") {
  auto profiles = parse_profiles(read_file(kConfig + "/profiles.json"));
  std::vector<AnomalySpec> specs{parse_anomaly("child=c03,date=2024-03-12,kind=verbal,factor=0")};
  CHECK(specs[0].child == "c03");
  CHECK(specs[0].factor == 0.0);

  auto hit = inject_anomaly(specs, profiles, Date(2024, 3, 12));
  auto miss = inject_anomaly(specs, profiles, Date(2024, 3, 11));
  CHECK(hit[2].talkativeness == 0.0);
  CHECK(miss[2].talkativeness == profiles[2].talkativeness);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (i != 2) CHECK(hit[i].talkativeness == profiles[i].talkativeness);
    CHECK(hit[i].activity_level == profiles[i].activity_level);
  }

  std::vector<AnomalySpec> identity{parse_anomaly("child=c01,date=2024-03-12,kind=physical,factor=1"),
                                    parse_anomaly("child=c02,date=2024-03-12,kind=social,factor=1")};
  auto same = inject_anomaly(identity, profiles, Date(2024, 3, 12));
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    CHECK(same[i].activity_level == profiles[i].activity_level);
    CHECK(same[i].talkativeness == profiles[i].talkativeness);
    CHECK(same[i].social_factor == 1.0);
  }

  std::vector<AnomalySpec> ghost{parse_anomaly("child=c99,date=2024-03-12,kind=verbal,factor=0")};
  CHECK(code_of([&] { inject_anomaly(ghost, profiles, Date(2024, 3, 1)); }) ==
        ErrorCode::UnknownChild);

  CHECK(code_of([] { parse_anomaly("child=c01,date=2024-03-12,kind=verbal"); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([] { parse_anomaly("child=c01,date=2024-03-12,kind=loud,factor=0"); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([] { parse_anomaly("child=c01,date=2024-03-12,kind=verbal,factor=-1"); }) ==
        ErrorCode::SchemaError);
  CHECK(code_of([] { parse_anomaly("child=c01,date=12/03/2024,kind=verbal,factor=0"); }) ==
        ErrorCode::BadDate);
}

TEST_CASE("an injected silent day is silent only that day") {
  auto cfg = base_config(2, 2);
  cfg.anomalies.push_back(parse_anomaly("child=c01,date=2024-03-05,kind=verbal,factor=0"));
  auto quiet = collect(generate_day(cfg, Date(2024, 3, 5)));
  auto normal = collect(generate_day(cfg, Date(2024, 3, 4)));
  auto voiced = [](const Collected& c, const std::string& device) {
    std::size_t n = 0;
    for (const auto& f : c.features) {
      n += f.device == device && f.kind == features::SensorKind::audio && f.value >= 0.05;
    }
    return n;
  };
  CHECK(voiced(quiet, "d01") == 0);
  CHECK(voiced(quiet, "d02") > 0);
  CHECK(voiced(normal, "d01") > 0);
}

TEST_CASE("school days skip weekends and fully cancelled dates") {
  auto cfg = base_config(1, 6);
  auto days = school_days(cfg);
  REQUIRE(days.size() == 6);
  CHECK(days[4] == Date(2024, 3, 8));
  CHECK(days[5] == Date(2024, 3, 11));
  cfg.overrides = schedule::parse_overrides(R"([{"date": "2024-03-05", "replace": []}])");
  CHECK(school_days(cfg)[1] == Date(2024, 3, 6));
}

TEST_CASE("dry runs: zero days and a pinned golden hash") {
  testing::TempDir dir;
  std::ostringstream log;
  auto cfg = base_config(2, 0);
  cfg.dry_run_dir = dir.path();
  RunSummary summary;
  CHECK(run(cfg, log, &summary) == 0);
  CHECK(summary.batches == 0);
  CHECK(testing::slurp(dir / "batches.ndjson").empty());

  cfg.days = 1;
  cfg.sample_rate = 8000;
  CHECK(run(cfg, log) == 0);
  const auto first = testing::slurp(dir / "batches.ndjson");
  CHECK(run(cfg, log) == 0);
  const auto second = testing::slurp(dir / "batches.ndjson");
  CHECK(sha256_hex(first) == sha256_hex(second));
  // Frozen output of seed 2024, c01+c02, 2024-03-04. A change here means the
  // event stream for a fixed seed changed: RNG, stream keying or batching.
  CHECK(sha256_hex(first) == "8bf436cdba76d572b3c2379e19e5c590130b4406a795173de2a12f8a99528370");
}

TEST_CASE("an unreachable server is a nonzero exit") {
  auto cfg = base_config(1, 1);
  cfg.server_url = "http://127.0.0.1:9";
  std::ostringstream log;
  CHECK(run(cfg, log) == 2);
  CHECK(log.str().find("connection") != std::string::npos);
}

}
