#include "senseme/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <system_error>

#include "senseme/error.hpp"

namespace senseme {

using nlohmann::json;

namespace {

[[noreturn]] void decode_error(const std::string& what) {
  throw Error(ErrorCode::DecodeError, what);
}

[[noreturn]] void sys_error(const std::string& what) {
  throw std::system_error(errno, std::generic_category(), what);
}

}  // namespace

std::string_view to_string(EventType type) {
  switch (type) {
    case EventType::features: return "features";
    case EventType::proximity: return "proximity";
    case EventType::selfreport: return "selfreport";
    case EventType::annotation: return "annotation";
    case EventType::message: return "message";
  }
  return "features";
}

std::optional<EventType> event_type_from(std::string_view text) {
  for (auto t : {EventType::features, EventType::proximity, EventType::selfreport,
                 EventType::annotation, EventType::message}) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::string encode(const EventRecord& record) {
  json j = {{"seq", record.seq},
            {"t_recv", record.t_recv},
            {"type", to_string(record.type)},
            {"payload", record.payload}};
  return j.dump();
}

EventRecord decode(std::string_view line) {
  auto j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) decode_error("malformed JSON line");
  if (!j.is_object() || j.size() != 4) decode_error("record must have exactly seq, t_recv, type, payload");
  if (!j.contains("seq") || !j["seq"].is_number_unsigned()) decode_error("seq must be a positive integer");
  if (!j.contains("t_recv") || !j["t_recv"].is_number_integer()) decode_error("t_recv must be an integer");
  if (!j.contains("type") || !j["type"].is_string()) decode_error("type must be a string");
  if (!j.contains("payload") || !j["payload"].is_object()) decode_error("payload must be an object");

  EventRecord r;
  r.seq = j["seq"].get<std::uint64_t>();
  if (r.seq == 0) decode_error("seq must be a positive integer");
  r.t_recv = j["t_recv"].get<Timestamp>();
  auto type = event_type_from(j["type"].get_ref<const std::string&>());
  if (!type) decode_error("unknown event type '" + j["type"].get<std::string>() + "'");
  r.type = *type;
  r.payload = std::move(j["payload"]);
  return r;
}

void StreamValidator::check(const EventRecord& record) {
  if (record.seq != last_ + 1) {
    decode_error("expected seq " + std::to_string(last_ + 1) + ", found " +
                 std::to_string(record.seq));
  }
  last_ = record.seq;
}

std::uint64_t read_log(const std::filesystem::path& path,
                       const std::function<void(const EventRecord&)>& visit,
                       std::optional<std::uint64_t> max_seq) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return 0;
    throw std::runtime_error("cannot open log " + path.string());
  }
  StreamValidator validator;
  std::string line;
  std::size_t line_no = 0;
  while (!max_seq || validator.last_seq() < *max_seq) {
    if (!std::getline(in, line)) break;
    ++line_no;
    if (in.eof()) throw CorruptLog(line_no, "truncated final line");
    try {
      EventRecord record = decode(line);
      validator.check(record);
      visit(record);
    } catch (const CorruptLog&) {
      throw;
    } catch (const Error& e) {
      throw CorruptLog(line_no, e.what());
    }
  }
  return validator.last_seq();
}

LogWriter::LogWriter(const std::filesystem::path& path, bool sync) : sync_(sync), path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) sys_error("open " + path.string());
}

LogWriter::~LogWriter() {
  if (fd_ >= 0) ::close(fd_);
}

void LogWriter::append(const EventRecord& record) {
  std::string line = encode(record);
  line.push_back('\n');
  const char* p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      sys_error("write " + path_.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  if (sync_ && ::fdatasync(fd_) != 0) sys_error("fdatasync " + path_.string());
}

}  // namespace senseme
