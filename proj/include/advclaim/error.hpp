#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace advclaim {

enum class ErrorKind {
  MissingField,
  UnknownLabel,
  EmptyDataset,
  MalformedRecord,
  InvalidBudget,
  InvalidArgument,
  EmptyClaim,
  EmptyMessages,
  BackendUnavailable,
  CassetteMiss,
  Timeout,
  EmptyText,
  EmbeddingUnavailable,
  JudgeUnavailable,
  UnparseableJudgeReply,
  ComponentFailure,
  EmptyCampaign,
  LengthMismatch,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library. Callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::InvalidBudget: return "InvalidBudget";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptyClaim: return "EmptyClaim";
    case ErrorKind::EmptyMessages: return "EmptyMessages";
    case ErrorKind::BackendUnavailable: return "BackendUnavailable";
    case ErrorKind::CassetteMiss: return "CassetteMiss";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::EmptyText: return "EmptyText";
    case ErrorKind::EmbeddingUnavailable: return "EmbeddingUnavailable";
    case ErrorKind::JudgeUnavailable: return "JudgeUnavailable";
    case ErrorKind::UnparseableJudgeReply: return "UnparseableJudgeReply";
    case ErrorKind::ComponentFailure: return "ComponentFailure";
    case ErrorKind::EmptyCampaign: return "EmptyCampaign";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace advclaim
