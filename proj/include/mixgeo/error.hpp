#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixgeo {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  NotUnitary,
  ConvergenceFailure,
  InvalidState,
  InvalidArgument,
  DegenerateSpectrum,
  AmbiguousMatching,
  RankChange,
  RankMismatch,
  IndexOutOfRange,
  VanishingOverlap,
  InvalidStep,
  DomainError,
  DimensionTooLarge,
  ConfigError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorKind::RankChange: return "RankChange";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::VanishingOverlap: return "VanishingOverlap";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Numerical failures (the input was well-formed but violates an assumption
/// the computation relies on, or a solver gave up).
constexpr bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::AmbiguousMatching:
    case ErrorKind::RankChange:
    case ErrorKind::VanishingOverlap:
    case ErrorKind::NotPSD:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

  /// Same error with extra location info appended, e.g. the offending t.
  Error with_context(const std::string& context) const {
    return Error(kind_, message_ + " (" + context + ")");
  }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace mixgeo
