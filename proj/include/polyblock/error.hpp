#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyblock {

enum class ErrorCode {
  InvalidPolynomial,
  CompanionUndefined,
  SquarefulReduction,
  LemmaViolation,
  PreconditionFailed,
  RamifiedPrime,
  RootInRange,
  IsolatedOffset,
  ZeroValue,
  InsufficientHarvest,
  NoBasePrimes,
  DuplicateModulus,
  BudgetExceeded,
  Unsupported,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by every library operation. The code identifies the
/// failure class; `offset()` is meaningful for IsolatedOffset and ZeroValue.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, long offset = 0)
      : std::runtime_error(message), code_(code), offset_(offset) {}

  ErrorCode code() const noexcept { return code_; }
  long offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  long offset_;
};

}  // namespace polyblock
