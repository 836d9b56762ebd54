#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sepcheck {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  BadTrace,
  DimensionMismatch,
  UnsupportedDims,
  OutOfRange,
  BadWeights,
  NotDichotomic,
  LengthMismatch,
  InvalidCandidate,
  NoCrossing,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::BadTrace: return "BadTrace";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnsupportedDims: return "UnsupportedDims";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::NotDichotomic: return "NotDichotomic";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::InvalidCandidate: return "InvalidCandidate";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; `kind()` lets
/// callers dispatch without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures carry the byte offset of the offending input.
class ParseError : public Error {
 public:
  ParseError(std::size_t byte_offset, const std::string& message)
      : Error(ErrorKind::ParseError, "byte " + std::to_string(byte_offset) + ": " + message),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace sepcheck
