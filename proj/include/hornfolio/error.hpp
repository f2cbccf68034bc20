#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hornfolio {

enum class ErrorKind {
  SyntaxError,
  UnsupportedFeature,
  SortError,
  ArityError,
  MixedTheory,
  ForwardRequiresLinear,
  UnsupportedWidth,
  ReplayUnsupported,
  PlanTheoryMismatch,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Every recoverable failure in the library. what() reads "<Kind>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnsupportedFeature: return "UnsupportedFeature";
    case ErrorKind::SortError: return "SortError";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::MixedTheory: return "MixedTheory";
    case ErrorKind::ForwardRequiresLinear: return "ForwardRequiresLinear";
    case ErrorKind::UnsupportedWidth: return "UnsupportedWidth";
    case ErrorKind::ReplayUnsupported: return "ReplayUnsupported";
    case ErrorKind::PlanTheoryMismatch: return "PlanTheoryMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Error";
}

}  // namespace hornfolio
