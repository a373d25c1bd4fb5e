#include "ertrace/model.hpp"

#include <unordered_set>

namespace ertrace {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyEntry: return "EmptyEntry";
    case ErrorCode::kDuplicateColumn: return "DuplicateColumn";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kAnnotationMismatch: return "AnnotationMismatch";
    case ErrorCode::kOverlappingMentions: return "OverlappingMentions";
    case ErrorCode::kAmbiguousSerialization: return "AmbiguousSerialization";
    case ErrorCode::kMalformed: return "Malformed";
    case ErrorCode::kMethodMismatch: return "MethodMismatch";
    case ErrorCode::kBlockingOverflow: return "BlockingOverflow";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kContractViolation: return "ContractViolation";
    case ErrorCode::kBackendMismatch: return "BackendMismatch";
    case ErrorCode::kDuplicateRow: return "DuplicateRow";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kUnknownRecordKind: return "UnknownRecordKind";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUnknownMethod: return "UnknownMethod";
    case ErrorCode::kUnknownBaseline: return "UnknownBaseline";
    case ErrorCode::kUnknownRow: return "UnknownRow";
    case ErrorCode::kRowSetMismatch: return "RowSetMismatch";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kNonBinaryLabel: return "NonBinaryLabel";
    case ErrorCode::kUnknownSplit: return "UnknownSplit";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

std::string Error::describe() const {
  std::string out;
  if (!stage_.empty()) out += "[" + stage_ + "] ";
  if (row_id_) out += "row " + std::to_string(*row_id_) + ": ";
  out += to_string(code_);
  out += ": ";
  out += what();
  return out;
}

const Column* DataEntry::find(std::string_view name) const {
  for (const auto& column : columns) {
    if (column.name == name) return &column;
  }
  return nullptr;
}

void check_entry(const DataEntry& entry) {
  if (entry.columns.empty()) {
    throw Error(ErrorCode::kEmptyEntry, "entry has no columns");
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& column : entry.columns) {
    if (!seen.insert(column.name).second) {
      throw Error(ErrorCode::kDuplicateColumn,
                  "duplicate column name '" + column.name + "'");
    }
  }
}

DataEntry validate_entry(DataEntry entry) {
  check_entry(entry);
  return entry;
}

MatchLabel label_from_code(long long code) {
  if (code == 0) return MatchLabel::kNotMatch;
  if (code == 1) return MatchLabel::kMatch;
  throw Error(ErrorCode::kNonBinaryLabel,
              "label code " + std::to_string(code) + " is not 0 or 1");
}

std::string_view to_string(MatchLabel label) {
  return label == MatchLabel::kMatch ? "match" : "not-match";
}

MethodId::MethodId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "method id must be non-empty");
  }
}

std::string_view connector(PromptStyle style) noexcept {
  return style == PromptStyle::kSlash ? " / " : " ";
}

std::string_view to_string(PromptStyle style) noexcept {
  return style == PromptStyle::kSlash ? "slash" : "space";
}

PromptStyle prompt_style_from_string(std::string_view name) {
  if (name == "slash") return PromptStyle::kSlash;
  if (name == "space") return PromptStyle::kSpace;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown prompt style '" + std::string(name) + "'");
}

}  // namespace ertrace
