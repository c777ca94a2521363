#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace senseme {

enum class ErrorCode {
  InvalidSample,
  InvalidFrame,
  OverlapError,
  InvertedWindow,
  UnknownZone,
  KindMismatch,
  UnknownChild,
  UnknownDevice,
  PrivacyViolation,
  SchemaError,
  SelfSighting,
  UnknownEmotion,
  BadDate,
  CueNotFound,
  EmptyText,
  BadRole,
  DecodeError,
  CorruptLog,
};

std::string_view to_string(ErrorCode code);

// HTTP status used by the service API for each error kind.
int http_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Replay failure pinned to a 1-based line of the log file.
class CorruptLog : public Error {
 public:
  CorruptLog(std::size_t line, const std::string& detail);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace senseme
