#include "senseme/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "senseme/error.hpp"

namespace senseme::features {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool axis_ok(double v) { return std::isfinite(v) && std::abs(v) <= kSensorRangeG; }

}  // namespace

std::string_view to_string(SensorKind kind) {
  return kind == SensorKind::motion ? "motion" : "audio";
}

SensorKind sensor_kind_from(std::string_view text) {
  if (text == "motion") return SensorKind::motion;
  if (text == "audio") return SensorKind::audio;
  throw Error(ErrorCode::SchemaError, "unknown feature kind '" + std::string(text) + "'");
}

double motion_count_or_nan(const AccelSample& s) noexcept {
  if (!axis_ok(s.ax) || !axis_ok(s.ay) || !axis_ok(s.az)) return kNaN;
  return std::abs(std::sqrt(s.ax * s.ax + s.ay * s.ay + s.az * s.az) - 1.0);
}

double motion_count(const AccelSample& sample) {
  double c = motion_count_or_nan(sample);
  if (std::isnan(c)) {
    throw Error(ErrorCode::InvalidSample,
                "accelerometer sample at t=" + std::to_string(sample.t) +
                    " is non-finite or outside +/-16 g");
  }
  return c;
}

double audio_rms_or_nan(std::span<const double> samples) noexcept {
  if (samples.empty()) return kNaN;
  double sum = 0.0;
  bool in_range = true;
  for (double x : samples) {
    // written so that NaN fails the test
    in_range &= (x >= -1.0 && x <= 1.0);
    sum += x * x;
  }
  if (!in_range) return kNaN;
  // Guard against rounding pushing a full-scale frame past 1.
  return std::min(1.0, std::sqrt(sum / static_cast<double>(samples.size())));
}

double audio_rms(std::span<const double> samples) {
  if (samples.empty()) throw Error(ErrorCode::InvalidFrame, "empty audio frame");
  double rms = audio_rms_or_nan(samples);
  if (std::isnan(rms)) throw Error(ErrorCode::InvalidFrame, "audio amplitude outside [-1, 1]");
  return rms;
}

std::vector<SecondFeature> bucket_seconds(std::string_view device,
                                          std::span<const TimedValue> inputs,
                                          SensorKind kind) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<Timestamp, Acc> groups;
  for (const auto& in : inputs) {
    auto& acc = groups[static_cast<Timestamp>(std::floor(in.t))];
    acc.sum += in.value;
    ++acc.n;
  }
  std::vector<SecondFeature> out;
  out.reserve(groups.size());
  for (const auto& [t, acc] : groups) {
    out.push_back({std::string(device), t, kind, acc.sum / static_cast<double>(acc.n)});
  }
  return out;
}

}  // namespace senseme::features
