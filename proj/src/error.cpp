#include "locsim/error.hpp"

namespace locsim {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::PortLimitExceeded: return "PortLimitExceeded";
    case ErrorCode::NotAHost: return "NotAHost";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::InvalidBandwidth: return "InvalidBandwidth";
    case ErrorCode::DuplicateFile: return "DuplicateFile";
    case ErrorCode::UnknownFile: return "UnknownFile";
    case ErrorCode::InfeasibleMix: return "InfeasibleMix";
    case ErrorCode::NegativeDelay: return "NegativeDelay";
    case ErrorCode::DispatchFailure: return "DispatchFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownVm: return "UnknownVm";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

}  // namespace locsim
