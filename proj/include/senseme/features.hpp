#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "senseme/time.hpp"

// Device-side reduction of raw sensor signals to one scalar per second.
// Raw frames never leave this layer; callers only get the scalars back.
namespace senseme::features {

inline constexpr double kSensorRangeG = 16.0;
inline constexpr int kDefaultSampleRate = 8000;

struct AccelSample {
  Timestamp t = 0;
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
};

// One second of mono audio, amplitudes normalized to [-1, +1].
struct AudioFrame {
  Timestamp t = 0;
  std::vector<double> samples;
};

enum class SensorKind { motion, audio };

std::string_view to_string(SensorKind kind);
// Throws Error{SchemaError} for anything but "motion" / "audio".
SensorKind sensor_kind_from(std::string_view text);

struct SecondFeature {
  std::string device;
  Timestamp t = 0;
  SensorKind kind = SensorKind::motion;
  double value = 0.0;

  friend bool operator==(const SecondFeature&, const SecondFeature&) = default;
};

// Raw reading before per-second bucketing; t may be fractional.
struct TimedValue {
  double t = 0.0;
  double value = 0.0;
};

// |‖a‖ - 1 g|. Throws Error{InvalidSample} on non-finite or out-of-range axes.
double motion_count(const AccelSample& sample);

// sqrt(mean(x²)). Throws Error{InvalidFrame} on empty input or any amplitude
// outside [-1, 1] (NaN included).
double audio_rms(std::span<const double> samples);
inline double audio_rms(const AudioFrame& frame) { return audio_rms(frame.samples); }

// Non-throwing variants used by the batch kernels; NaN marks invalid input.
double motion_count_or_nan(const AccelSample& sample) noexcept;
double audio_rms_or_nan(std::span<const double> samples) noexcept;

// Groups readings by floor(t), mean-reduces each group and returns features in
// strictly increasing t. Seconds without readings are simply absent.
std::vector<SecondFeature> bucket_seconds(std::string_view device,
                                          std::span<const TimedValue> inputs,
                                          SensorKind kind);

}  // namespace senseme::features
