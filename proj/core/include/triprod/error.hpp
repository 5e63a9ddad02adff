#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace triprod {

enum class ErrorKind {
  PoleArgument,
  DomainTooSmall,
  SingularConfiguration,
  NonConvergent,
  PreconditionViolated,
  NonFinite,
  TruncationOverflow,
  InsufficientTruncation,
  QNotPositiveDefinite,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base error for every mathematical failure raised by the library.
/// Callers switch on kind(); the message carries the offending value.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::PoleArgument: return "PoleArgument";
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::SingularConfiguration: return "SingularConfiguration";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::TruncationOverflow: return "TruncationOverflow";
    case ErrorKind::InsufficientTruncation: return "InsufficientTruncation";
    case ErrorKind::QNotPositiveDefinite: return "QNotPositiveDefinite";
  }
  return "Unknown";
}

}  // namespace triprod
