#pragma once

#include <span>

#include "senseme/features.hpp"

// Batch feature-extraction kernels.
//
// `serial` is the reference; `omp` distributes items across threads. Each item
// is reduced by exactly the same code in both, so outputs are bit-identical
// regardless of thread count. Both throw Error{InvalidSample / InvalidFrame}
// naming the first invalid item; `out` must be the same length as the input.
namespace senseme::kernels {

namespace serial {
void motion_counts(std::span<const features::AccelSample> samples, std::span<double> out);
void frame_rms(std::span<const features::AudioFrame> frames, std::span<double> out);
}  // namespace serial

namespace omp {
void motion_counts(std::span<const features::AccelSample> samples, std::span<double> out);
void frame_rms(std::span<const features::AudioFrame> frames, std::span<double> out);
}  // namespace omp

}  // namespace senseme::kernels
