#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace senseme::sim {

// SplitMix64. The whole generator is the three lines in next(): add the
// golden-ratio increment 0x9E3779B97F4A7C15, then two xor-shift-multiply
// rounds (constants 0xBF58476D1CE4E5B9, 0x94D049BB133111EB) and a final
// xor-shift by 31. Being fully specified here, any implementation reproduces
// the same stream from the same seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Top 53 bits scaled to [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }
  // Inverse-CDF draw, -mean * ln(1 - u).
  double exponential(double mean);
  // Integer in [0, n); modulo reduction, bias below 2^-40 for n < 2^24.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a of a string, for turning ids into seed material.
std::uint64_t fnv1a(std::string_view text);

// Folds several words into one seed (each word is xored in and scrambled by a
// SplitMix64 step), so independent streams can be keyed by (seed, child, day).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words);

}  // namespace senseme::sim
