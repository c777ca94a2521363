#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "absl/time/civil_time.h"
#include "absl/time/time.h"

namespace senseme {

// Integer Unix seconds, UTC.
using Timestamp = std::int64_t;

// Calendar date in the school's local time zone.
using Date = absl::CivilDay;

// Strict "YYYY-MM-DD"; nullopt on anything else (including normalized dates
// such as 2024-02-30).
std::optional<Date> parse_date(std::string_view text);

// Like parse_date but throws Error{BadDate}.
Date require_date(std::string_view text);

std::string format_date(Date date);

Date local_date(Timestamp t, const absl::TimeZone& tz);

// Absolute second of local midnight starting `date`.
Timestamp day_start(Date date, const absl::TimeZone& tz);

// Absolute second of `minutes` after local midnight of `date`.
Timestamp local_minute(Date date, int minutes, const absl::TimeZone& tz);

// floor(a / b) for b > 0.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

}  // namespace senseme
