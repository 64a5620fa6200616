#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace locsim {

enum class ErrorCode {
  InvalidParameter,
  PortLimitExceeded,
  NotAHost,
  UnknownNode,
  InvalidBandwidth,
  DuplicateFile,
  UnknownFile,
  InfeasibleMix,
  NegativeDelay,
  DispatchFailure,
  ParseError,
  UnknownVm,
  ConfigError,
  IoError,
  OracleMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception; callers branch on
// code() rather than on message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace locsim
