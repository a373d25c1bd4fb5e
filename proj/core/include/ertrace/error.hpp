#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ertrace {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyEntry,
  kDuplicateColumn,
  kUnknownColumn,
  kServiceUnavailable,
  kMalformedResponse,
  kAnnotationMismatch,
  kOverlappingMentions,
  kAmbiguousSerialization,
  kMalformed,
  kMethodMismatch,
  kBlockingOverflow,
  kDimensionMismatch,
  kContractViolation,
  kBackendMismatch,
  kDuplicateRow,
  kInvariantViolation,
  kUnknownRecordKind,
  kIo,
  kUnknownMethod,
  kUnknownBaseline,
  kUnknownRow,
  kRowSetMismatch,
  kZeroVector,
  kMissingFile,
  kDanglingReference,
  kNonBinaryLabel,
  kUnknownSplit,
  kInvalidConfig,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library is an Error carrying a code.
// Pipeline stages attach the stage name and, where one applies, the row.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::uint64_t>& row_id() const noexcept { return row_id_; }
  const std::string& stage() const noexcept { return stage_; }

  Error& at_row(std::uint64_t row_id) {
    row_id_ = row_id;
    return *this;
  }
  Error& in_stage(std::string stage) {
    stage_ = std::move(stage);
    return *this;
  }

  // "[stage] row N: Code: message"
  std::string describe() const;

 private:
  ErrorCode code_;
  std::optional<std::uint64_t> row_id_;
  std::string stage_;
};

}  // namespace ertrace
