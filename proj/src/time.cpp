#include "senseme/time.hpp"

#include "senseme/error.hpp"

namespace senseme {

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  Date day;
  if (!absl::ParseCivilTime(absl::string_view(text.data(), text.size()), &day)) return std::nullopt;
  // absl normalizes out-of-range fields; reject those.
  if (absl::FormatCivilTime(day) != text) return std::nullopt;
  return day;
}

Date require_date(std::string_view text) {
  auto day = parse_date(text);
  if (!day) throw Error(ErrorCode::BadDate, "bad date '" + std::string(text) + "'");
  return *day;
}

std::string format_date(Date date) { return absl::FormatCivilTime(date); }

Date local_date(Timestamp t, const absl::TimeZone& tz) {
  return absl::ToCivilDay(absl::FromUnixSeconds(t), tz);
}

Timestamp day_start(Date date, const absl::TimeZone& tz) {
  return absl::ToUnixSeconds(absl::FromCivil(absl::CivilSecond(date), tz));
}

Timestamp local_minute(Date date, int minutes, const absl::TimeZone& tz) {
  absl::CivilSecond cs(date.year(), date.month(), date.day(), 0, minutes, 0);
  return absl::ToUnixSeconds(absl::FromCivil(cs, tz));
}

}  // namespace senseme
