#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plotmorph {

enum class ErrorCode {
  // intercept
  TargetVanished,
  // viewmodel
  DuplicateName,
  UnknownView,
  InvalidConfig,
  ParseError,
  // translate / stats
  UnknownBasis,
  AmbiguousColor,
  UnknownFeature,
  UnknownGroupColumn,
  UnknownColumn,
  UnknownElement,
  EmptyStack,
  LayerOrder,
  InvalidArgument,
  Unsupported,
  // store
  IoError,
  Overwrite,
  UnknownPath,
  CorruptChunk,
  // serve
  PortInUse,
  NotStarted,
  UnknownMount,
  // bridge
  InvalidOverride,
  // survey
  RateLimited,
  TransportError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::TargetVanished: return "TargetVanished";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownView: return "UnknownView";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownBasis: return "UnknownBasis";
    case ErrorCode::AmbiguousColor: return "AmbiguousColor";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::UnknownGroupColumn: return "UnknownGroupColumn";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::EmptyStack: return "EmptyStack";
    case ErrorCode::LayerOrder: return "LayerOrder";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Overwrite: return "Overwrite";
    case ErrorCode::UnknownPath: return "UnknownPath";
    case ErrorCode::CorruptChunk: return "CorruptChunk";
    case ErrorCode::PortInUse: return "PortInUse";
    case ErrorCode::NotStarted: return "NotStarted";
    case ErrorCode::UnknownMount: return "UnknownMount";
    case ErrorCode::InvalidOverride: return "InvalidOverride";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::TransportError: return "TransportError";
  }
  return "Unknown";
}

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace plotmorph
