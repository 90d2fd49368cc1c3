#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace msmlab {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  NonzeroMean,
  ChartUndefined,
  NoConvergence,
  PicardDiverged,
  TooLarge,
  ConfigError,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the Picard/Duhamel stepper; carries the sup-norm increment of
/// every iteration that was attempted.
class PicardDivergedError : public Error {
 public:
  PicardDivergedError(const std::string& message, std::vector<double> trace)
      : Error(ErrorCode::PicardDiverged, message), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidArgument, message);
}

}  // namespace msmlab
