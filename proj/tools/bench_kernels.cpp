/*
Serial vs OpenMP feature kernels on one simulated class hour of audio and one
hour of accelerometer samples. Prints timings and checks both agree bit for bit.
*/

#include <chrono>
#include <iostream>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"

#include "senseme/kernels.hpp"
#include "senseme/simulator.hpp"

namespace chrono = std::chrono;

template <typename Fn>
double time_ms(Fn&& fn, int reps) {
  auto t0 = chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  auto t1 = chrono::steady_clock::now();
  return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

int main(int argc, char** argv) {
  std::size_t seconds = 3600;
  int reps = 3;
  CLI::App app{"Serial vs OpenMP feature kernels"};
  app.add_option("--seconds", seconds, "simulated seconds (one frame and one sample each)")
      ->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "timed repetitions")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  senseme::sim::SplitMix64 rng(42);
  senseme::sim::AudioSynth synth;
  std::vector<senseme::features::AudioFrame> frames(seconds);
  std::vector<senseme::features::AccelSample> samples(seconds);
  for (std::size_t i = 0; i < seconds; ++i) {
    synth.fill(frames[i], static_cast<senseme::Timestamp>(i), 0.5, rng);
    samples[i] = senseme::sim::synthesize_motion(static_cast<senseme::Timestamp>(i), 0.5, rng);
  }

  std::vector<double> a(seconds), b(seconds);
  double rms_serial = time_ms([&] { senseme::kernels::serial::frame_rms(frames, a); }, reps);
  double rms_omp = time_ms([&] { senseme::kernels::omp::frame_rms(frames, b); }, reps);
  bool rms_same = a == b;

  double mc_serial = time_ms([&] { senseme::kernels::serial::motion_counts(samples, a); }, reps);
  double mc_omp = time_ms([&] { senseme::kernels::omp::motion_counts(samples, b); }, reps);
  bool mc_same = a == b;

  std::cout << "threads " << omp_get_max_threads() << ", " << seconds << " frames of "
            << synth.sample_rate() << " samples\n";
  std::cout << "frame_rms      serial " << rms_serial << " ms  omp " << rms_omp << " ms  speedup "
            << rms_serial / rms_omp << (rms_same ? "" : "  MISMATCH") << "\n";
  std::cout << "motion_counts  serial " << mc_serial << " ms  omp " << mc_omp << " ms  speedup "
            << mc_serial / mc_omp << (mc_same ? "" : "  MISMATCH") << "\n";
  return rms_same && mc_same ? 0 : 1;
}
