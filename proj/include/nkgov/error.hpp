#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nkgov {

enum class ErrorCode {
  DuplicateId,
  UnknownEndpoint,
  UnknownInterface,
  UnknownNode,
  UnknownClass,
  ParseError,
  InvalidBounds,
  UnknownShape,
  MissingReference,
  UnknownActionKind,
  UnknownStatus,
  InvalidSpec,
  InvalidCounts,
  InsufficientSizes,
  DegenerateInput,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` carries the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace nkgov
