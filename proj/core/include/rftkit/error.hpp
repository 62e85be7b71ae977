#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rftkit {

enum class ErrorCode {
  EmptyQuestion,
  InvalidTemplate,
  InvalidTagName,
  LengthNotDivisible,
  InvalidArgument,
  EmptyResponse,
  EndpointUnreachable,
  AuthFailure,
  RateLimited,
  DuplicateResult,
  FileNotFound,
  SchemaViolation,
  LengthMismatch,
  EmptyBenchmark,
  MissingColumn,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every rftkit module. Functions documented as total
/// never throw it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // 1-based line number for file/schema errors.
  std::optional<std::size_t> line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

}  // namespace rftkit
