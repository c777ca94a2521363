#pragma once

// Brute-force reference computations used by the tests. Each one re-derives a
// result the slow, obvious way and deliberately shares no code with the
// library routine it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oracle {

// sqrt(mean(x^2)) accumulated in long double.
inline double rms(const std::vector<double>& xs) {
  long double acc = 0.0L;
  for (double x : xs) acc += static_cast<long double>(x) * static_cast<long double>(x);
  return static_cast<double>(std::sqrt(acc / static_cast<long double>(xs.size())));
}

// Group-by-second then average, via an explicit list per second.
inline std::vector<std::pair<std::int64_t, double>> bucket_means(
    const std::vector<std::pair<double, double>>& inputs) {
  std::map<std::int64_t, std::vector<double>> groups;
  for (const auto& [t, v] : inputs) groups[static_cast<std::int64_t>(std::floor(t))].push_back(v);
  std::vector<std::pair<std::int64_t, double>> out;
  for (const auto& [t, vs] : groups) {
    out.emplace_back(t, std::accumulate(vs.begin(), vs.end(), 0.0) / static_cast<double>(vs.size()));
  }
  return out;
}

// A dated history entry: day number, class id ("" for non-verbal), kind tag,
// value (NaN when undefined).
struct HistoryItem {
  long day;
  std::string class_id;
  int kind;
  double value;
};

// Mean over days [as_of-7, as_of-1], walking day by day; -1 when fewer than
// `min_history` entries qualify.
inline std::pair<double, int> trailing_mean(const std::vector<HistoryItem>& history, long as_of,
                                            int kind, const std::string& class_id,
                                            int min_history = 3) {
  std::vector<double> picked;
  for (long d = as_of - 7; d <= as_of - 1; ++d) {
    for (const auto& h : history) {
      if (h.day != d || h.kind != kind || std::isnan(h.value)) continue;
      if (!class_id.empty() && h.class_id != class_id) continue;
      picked.push_back(h.value);
    }
  }
  if (static_cast<int>(picked.size()) < min_history) return {-1.0, static_cast<int>(picked.size())};
  long double sum = 0.0L;
  for (double v : picked) sum += v;
  return {static_cast<double>(sum / static_cast<long double>(picked.size())),
          static_cast<int>(picked.size())};
}

struct Sighting {
  std::int64_t t;
  std::string observer;
  std::string seen;
};

// All (a, b, epoch) with a < b such that some sighting between a and b, in
// either direction, falls in [epoch*E, epoch*E + E). Scans every candidate
// epoch of every pair against the full sighting list.
inline std::set<std::tuple<std::string, std::string, std::int64_t>> copresence(
    const std::vector<Sighting>& sightings, std::int64_t E = 300) {
  std::set<std::string> devices;
  std::int64_t lo = 0, hi = -1;
  for (const auto& s : sightings) {
    devices.insert(s.observer);
    devices.insert(s.seen);
    std::int64_t k = s.t >= 0 ? s.t / E : -((-s.t + E - 1) / E);
    if (hi < lo) lo = hi = k;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  std::set<std::tuple<std::string, std::string, std::int64_t>> out;
  for (const auto& a : devices) {
    for (const auto& b : devices) {
      if (!(a < b)) continue;
      for (std::int64_t k = lo; k <= hi; ++k) {
        for (const auto& s : sightings) {
          const bool pair = (s.observer == a && s.seen == b) || (s.observer == b && s.seen == a);
          if (pair && s.t >= k * E && s.t < k * E + E) {
            out.insert({a, b, k});
            break;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
