#include <random>

#include "doctest.h"
#include "senseme/event_log.hpp"
#include "code_of.hpp"
#include "support.hpp"

using namespace senseme;
using nlohmann::json;
using testing::code_of;

namespace {

EventRecord record(std::uint64_t seq, EventType type = EventType::selfreport) {
  return {seq, 1709542800 + static_cast<Timestamp>(seq), type,
          json{{"child", "c1"}, {"t", 1709542800}, {"emotion", "e1"}}};
}

void write_log(const std::filesystem::path& path, std::uint64_t n) {
  LogWriter w(path, false);
  for (std::uint64_t s = 1; s <= n; ++s) w.append(record(s));
}

std::size_t corrupt_line_of(const std::filesystem::path& path) {
  try {
    read_log(path, [](const EventRecord&) {});
  } catch (const CorruptLog& e) {
    CHECK(e.code() == ErrorCode::CorruptLog);
    return e.line();
  }
  FAIL("expected CorruptLog");
  return 0;
}

}  // namespace

TEST_SUITE("event_log") {

TEST_CASE("encoding is one sorted-key line") {
  auto line = encode(record(3));
  CHECK(line ==
        R"({"payload":{"child":"c1","emotion":"e1","t":1709542800},"seq":3,"t_recv":1709542803,"type":"selfreport"})");
  CHECK(line.find('\n') == std::string::npos);
  CHECK(decode(line) == record(3));
}

TEST_CASE("random records round-trip") {
  std::mt19937_64 gen(81);
  std::uniform_real_distribution<double> v(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    EventRecord r;
    r.seq = 1 + gen() % 1000000;
    r.t_recv = static_cast<Timestamp>(gen() % 2000000000);
    r.type = static_cast<EventType>(gen() % 5);
    r.payload = {{"x", v(gen)}, {"text", std::string(gen() % 20, static_cast<char>('a' + gen() % 26))},
                 {"nested", {{"k", json::array({1, 2.5, "é\n\"q\""})}}}};
    CHECK(decode(encode(r)) == r);
    CHECK(encode(decode(encode(r))) == encode(r));
  }
}

TEST_CASE("decode rejects malformed records") {
  CHECK(code_of([] { decode("{"); }) == ErrorCode::DecodeError);
  CHECK(code_of([] { decode(R"({"payload":{},"seq":1,"t_recv":0,"type":"gossip"})"); }) ==
        ErrorCode::DecodeError);
  CHECK(code_of([] { decode(R"({"payload":{},"seq":0,"t_recv":0,"type":"message"})"); }) ==
        ErrorCode::DecodeError);
  CHECK(code_of([] { decode(R"({"payload":{},"seq":-2,"t_recv":0,"type":"message"})"); }) ==
        ErrorCode::DecodeError);
  CHECK(code_of([] { decode(R"({"payload":{},"seq":1,"type":"message"})"); }) ==
        ErrorCode::DecodeError);
  CHECK(code_of([] {
          decode(R"({"extra":1,"payload":{},"seq":1,"t_recv":0,"type":"message"})");
        }) == ErrorCode::DecodeError);
  CHECK(code_of([] { decode(R"({"payload":{},"seq":"1","t_recv":0,"type":"message"})"); }) ==
        ErrorCode::DecodeError);
}

TEST_CASE("stream validation catches regressions and gaps") {
  StreamValidator v;
  v.check(record(1));
  v.check(record(2));
  CHECK(code_of([&] { v.check(record(2)); }) == ErrorCode::DecodeError);
  CHECK(code_of([&] { v.check(record(1)); }) == ErrorCode::DecodeError);
  CHECK(code_of([&] { v.check(record(4)); }) == ErrorCode::DecodeError);
  CHECK(v.last_seq() == 2);
  StreamValidator fresh;
  CHECK(code_of([&] { fresh.check(record(2)); }) == ErrorCode::DecodeError);
}

TEST_CASE("read_log visits records in order") {
  testing::TempDir dir;
  auto path = dir / "events.ndjson";
  CHECK(read_log(path, [](const EventRecord&) { FAIL("missing log has records"); }) == 0);

  write_log(path, 50);
  std::vector<std::uint64_t> seqs;
  CHECK(read_log(path, [&](const EventRecord& r) { seqs.push_back(r.seq); }) == 50);
  REQUIRE(seqs.size() == 50);
  CHECK(seqs.front() == 1);
  CHECK(seqs.back() == 50);

  std::uint64_t n = 0;
  CHECK(read_log(path, [&](const EventRecord&) { ++n; }, 20) == 20);
  CHECK(n == 20);

  testing::spit(dir / "empty.ndjson", "");
  CHECK(read_log(dir / "empty.ndjson", [](const EventRecord&) {}) == 0);
}

TEST_CASE("a corrupted line is reported by number") {
  testing::TempDir dir;
  auto path = dir / "events.ndjson";
  write_log(path, 60);
  auto text = testing::slurp(path);
  std::size_t pos = 0;
  for (int i = 0; i < 41; ++i) pos = text.find('\n', pos) + 1;
  text.replace(pos, 1, "#");
  testing::spit(path, text);
  CHECK(corrupt_line_of(path) == 42);

  // the prefix before the bad line still replays
  CHECK(read_log(path, [](const EventRecord&) {}, 41) == 41);
}

TEST_CASE("sequence problems in a file are CorruptLog at that line") {
  testing::TempDir dir;
  auto path = dir / "events.ndjson";
  testing::spit(path, encode(record(1)) + "\n" + encode(record(2)) + "\n" + encode(record(2)) + "\n");
  CHECK(corrupt_line_of(path) == 3);
}

TEST_CASE("a truncated final line is CorruptLog") {
  testing::TempDir dir;
  auto path = dir / "events.ndjson";
  write_log(path, 5);
  auto text = testing::slurp(path);
  testing::spit(path, text.substr(0, text.size() - 10));
  CHECK(corrupt_line_of(path) == 5);

  // a complete record that just lost its newline is still an unfinished write
  testing::spit(path, text.substr(0, text.size() - 1));
  CHECK(corrupt_line_of(path) == 5);
}

TEST_CASE("the writer only appends") {
  testing::TempDir dir;
  auto path = dir / "events.ndjson";
  write_log(path, 3);
  const auto before = testing::slurp(path);
  {
    LogWriter w(path, true);
    w.append(record(4));
  }
  const auto after = testing::slurp(path);
  CHECK(after.substr(0, before.size()) == before);
  CHECK(after.substr(before.size()) == encode(record(4)) + "\n");
}

}
