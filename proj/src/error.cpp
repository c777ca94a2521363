#include "senseme/error.hpp"

namespace senseme {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSample: return "InvalidSample";
    case ErrorCode::InvalidFrame: return "InvalidFrame";
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::InvertedWindow: return "InvertedWindow";
    case ErrorCode::UnknownZone: return "UnknownZone";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::UnknownChild: return "UnknownChild";
    case ErrorCode::UnknownDevice: return "UnknownDevice";
    case ErrorCode::PrivacyViolation: return "PrivacyViolation";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::SelfSighting: return "SelfSighting";
    case ErrorCode::UnknownEmotion: return "UnknownEmotion";
    case ErrorCode::BadDate: return "BadDate";
    case ErrorCode::CueNotFound: return "CueNotFound";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::BadRole: return "BadRole";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::CorruptLog: return "CorruptLog";
  }
  return "Unknown";
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownChild:
    case ErrorCode::UnknownDevice:
    case ErrorCode::CueNotFound:
      return 404;
    case ErrorCode::PrivacyViolation:
      return 422;
    case ErrorCode::CorruptLog:
    case ErrorCode::DecodeError:
    case ErrorCode::UnknownZone:
      return 500;
    default:
      return 400;
  }
}

CorruptLog::CorruptLog(std::size_t line, const std::string& detail)
    : Error(ErrorCode::CorruptLog,
            "corrupt log at line " + std::to_string(line) + ": " + detail),
      line_(line) {}

}  // namespace senseme
