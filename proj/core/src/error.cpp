#include "rftkit/error.hpp"

namespace rftkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyQuestion: return "EmptyQuestion";
    case ErrorCode::InvalidTemplate: return "InvalidTemplate";
    case ErrorCode::InvalidTagName: return "InvalidTagName";
    case ErrorCode::LengthNotDivisible: return "LengthNotDivisible";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyResponse: return "EmptyResponse";
    case ErrorCode::EndpointUnreachable: return "EndpointUnreachable";
    case ErrorCode::AuthFailure: return "AuthFailure";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::DuplicateResult: return "DuplicateResult";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyBenchmark: return "EmptyBenchmark";
    case ErrorCode::MissingColumn: return "MissingColumn";
  }
  return "Unknown";
}

namespace {

std::string decorate(const std::string& message, std::optional<std::size_t> line) {
  if (!line) return message;
  return "line " + std::to_string(*line) + ": " + message;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<std::size_t> line)
    : std::runtime_error(decorate(message, line)), code_(code), line_(line) {}

}  // namespace rftkit
