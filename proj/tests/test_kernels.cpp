#include <cstring>
#include <random>
#include <stdexcept>
#include <vector>

#include <omp.h>

#include "doctest.h"
#include "senseme/features.hpp"
#include "senseme/kernels.hpp"
#include "code_of.hpp"
#include "support.hpp"

using namespace senseme;
using namespace senseme::features;
using testing::code_of;

namespace {

std::vector<AudioFrame> random_frames(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> len(1, 800);
  std::vector<AudioFrame> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    frames[i].t = static_cast<Timestamp>(i);
    frames[i].samples.resize(len(gen));
    for (auto& x : frames[i].samples) x = amp(gen);
  }
  return frames;
}

std::vector<AccelSample> random_samples(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  std::vector<AccelSample> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = {static_cast<Timestamp>(i), u(gen), u(gen), u(gen)};
  return out;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("serial kernels agree with the scalar functions") {
  auto frames = random_frames(200, 1);
  std::vector<double> out(frames.size());
  kernels::serial::frame_rms(frames, out);
  for (std::size_t i = 0; i < frames.size(); ++i) CHECK(out[i] == audio_rms(frames[i]));

  auto samples = random_samples(1000, 2);
  std::vector<double> mc(samples.size());
  kernels::serial::motion_counts(samples, mc);
  for (std::size_t i = 0; i < samples.size(); ++i) CHECK(mc[i] == motion_count(samples[i]));
}

TEST_CASE("omp kernels are bit-identical to serial for any thread count") {
  auto frames = random_frames(513, 3);
  auto samples = random_samples(4097, 4);
  std::vector<double> rms_ref(frames.size()), mc_ref(samples.size());
  kernels::serial::frame_rms(frames, rms_ref);
  kernels::serial::motion_counts(samples, mc_ref);

  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    std::vector<double> rms(frames.size()), mc(samples.size());
    kernels::omp::frame_rms(frames, rms);
    kernels::omp::motion_counts(samples, mc);
    CHECK(bitwise_equal(rms, rms_ref));
    CHECK(bitwise_equal(mc, mc_ref));
  }
  omp_set_num_threads(saved);
}

TEST_CASE("kernels report the first invalid item") {
  auto frames = random_frames(50, 5);
  frames[17].samples[0] = 2.0;
  frames[40].samples.clear();
  std::vector<double> out(frames.size());
  for (auto fn : {&kernels::serial::frame_rms, &kernels::omp::frame_rms}) {
    try {
      fn(frames, out);
      FAIL("expected InvalidFrame");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidFrame);
      CHECK(std::string(e.what()).find("index 17") != std::string::npos);
    }
  }

  auto samples = random_samples(10, 6);
  samples[3].az = std::nan("");
  std::vector<double> mc(samples.size());
  CHECK(code_of([&] { kernels::omp::motion_counts(samples, mc); }) == ErrorCode::InvalidSample);
}

TEST_CASE("kernels reject a mismatched output span") {
  auto samples = random_samples(4, 7);
  std::vector<double> out(3);
  CHECK_THROWS_AS(kernels::serial::motion_counts(samples, out), std::invalid_argument);
  CHECK_THROWS_AS(kernels::omp::motion_counts(samples, out), std::invalid_argument);
}

}
