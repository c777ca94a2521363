#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "senseme/time.hpp"

namespace senseme {

enum class EventType { features, proximity, selfreport, annotation, message };

std::string_view to_string(EventType type);
std::optional<EventType> event_type_from(std::string_view text);

struct EventRecord {
  std::uint64_t seq = 0;  // 1-based, gapless
  Timestamp t_recv = 0;
  EventType type = EventType::features;
  nlohmann::json payload;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

// One JSON object per line, keys in sorted order, no trailing newline.
std::string encode(const EventRecord& record);

// Throws Error{DecodeError} on malformed JSON, missing/mistyped fields, seq 0
// or an unknown type tag.
EventRecord decode(std::string_view line);

// Stream-level check: each record must carry the seq right after the previous
// one, starting from 1.
class StreamValidator {
 public:
  void check(const EventRecord& record);  // throws Error{DecodeError}
  std::uint64_t last_seq() const { return last_; }

 private:
  std::uint64_t last_ = 0;
};

// Reads and validates a log file, handing each record to `visit` in order.
// Stops after `max_seq` when given. Any decode, sequencing or visitor failure
// becomes CorruptLog carrying the 1-based line number; a final line without a
// terminating newline is a truncated write and also CorruptLog.
// Returns the number of records visited. A missing file is an empty log.
std::uint64_t read_log(const std::filesystem::path& path,
                       const std::function<void(const EventRecord&)>& visit,
                       std::optional<std::uint64_t> max_seq = std::nullopt);

// Append-only writer. Each append is one write(2) of a whole line, followed by
// fdatasync when `sync` is set, so an acknowledged record survives a restart.
class LogWriter {
 public:
  LogWriter(const std::filesystem::path& path, bool sync);
  ~LogWriter();
  LogWriter(const LogWriter&) = delete;
  LogWriter& operator=(const LogWriter&) = delete;

  void append(const EventRecord& record);

 private:
  int fd_ = -1;
  bool sync_;
  std::filesystem::path path_;
};

}  // namespace senseme
