#include "senseme/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include <stdexcept>

#include "senseme/error.hpp"

namespace senseme::kernels {

namespace {

void check_sizes(std::size_t in, std::size_t out) {
  if (in != out) {
    throw std::invalid_argument("kernel output span has " + std::to_string(out) +
                                " slots for " + std::to_string(in) + " inputs");
  }
}

void raise_first_nan(std::span<const double> out, ErrorCode code, const char* what) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (std::isnan(out[i])) {
      throw Error(code, std::string(what) + " at batch index " + std::to_string(i));
    }
  }
}

}  // namespace

namespace serial {

void motion_counts(std::span<const features::AccelSample> samples, std::span<double> out) {
  check_sizes(samples.size(), out.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = features::motion_count_or_nan(samples[i]);
  }
  raise_first_nan(out, ErrorCode::InvalidSample, "invalid accelerometer sample");
}

void frame_rms(std::span<const features::AudioFrame> frames, std::span<double> out) {
  check_sizes(frames.size(), out.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out[i] = features::audio_rms_or_nan(frames[i].samples);
  }
  raise_first_nan(out, ErrorCode::InvalidFrame, "invalid audio frame");
}

}  // namespace serial

namespace omp {

void motion_counts(std::span<const features::AccelSample> samples, std::span<double> out) {
  check_sizes(samples.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = features::motion_count_or_nan(samples[i]);
  }
  raise_first_nan(out, ErrorCode::InvalidSample, "invalid accelerometer sample");
}

void frame_rms(std::span<const features::AudioFrame> frames, std::span<double> out) {
  check_sizes(frames.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(frames.size());
  // frames are equally sized, static split balances well
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = features::audio_rms_or_nan(frames[i].samples);
  }
  raise_first_nan(out, ErrorCode::InvalidFrame, "invalid audio frame");
}

}  // namespace omp

}  // namespace senseme::kernels
