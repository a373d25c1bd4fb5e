#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ertrace/hyperparameters.hpp"
#include "ertrace/model.hpp"

namespace ertrace {

// What was fed to the matcher for one row, recorded before the run.
struct InputDataRecord {
  std::string dataset_name;
  MethodId method;
  RowId row_id = 0;
  std::string left_entry;
  std::string right_entry;
  MatchLabel ground_truth = MatchLabel::kNotMatch;

  friend bool operator==(const InputDataRecord&, const InputDataRecord&) = default;
};

// The input record extended with what the run produced. Hyperparameters
// live once in the log header.
struct PredictedDataRecord {
  InputDataRecord input;
  MatchLabel predicted = MatchLabel::kNotMatch;
  double confidence = 0.0;
  std::vector<double> embedding;

  RowId row_id() const noexcept { return input.row_id; }
  friend bool operator==(const PredictedDataRecord&,
                         const PredictedDataRecord&) = default;
};

enum class RecordKind { kInput, kPredicted };

std::string_view to_string(RecordKind kind) noexcept;
// Throws kUnknownRecordKind.
RecordKind record_kind_from_string(std::string_view name);

struct LogHeader {
  std::string dataset_name;
  MethodId method;
  RecordKind record_kind = RecordKind::kInput;
  Hyperparameters hyperparameters;
  std::string created_at;

  friend bool operator==(const LogHeader&, const LogHeader&) = default;
};

// One log per (dataset, method, kind). Rows are ordered by strictly
// increasing row_id and agree with the header's dataset and method.
struct LogFile {
  LogHeader header;
  std::variant<std::vector<InputDataRecord>, std::vector<PredictedDataRecord>> records;

  static LogFile input(LogHeader header, std::vector<InputDataRecord> rows);
  static LogFile predicted(LogHeader header, std::vector<PredictedDataRecord> rows);

  RecordKind kind() const noexcept { return header.record_kind; }
  const MethodId& method() const noexcept { return header.method; }
  std::size_t size() const noexcept;

  // Throw kInvariantViolation when the log holds the other kind.
  const std::vector<InputDataRecord>& inputs() const;
  const std::vector<PredictedDataRecord>& predictions() const;

  // Embedding dimension shared by every predicted row; nullopt for input
  // logs and empty predicted logs.
  std::optional<std::size_t> embedding_dim() const;

  friend bool operator==(const LogFile&, const LogFile&) = default;
};

// Throws kDuplicateRow, kDimensionMismatch, kContractViolation or
// kInvariantViolation on the first broken invariant.
void check_log(const LogFile& log);

// Exact bytes write_log puts on disk.
std::string to_canonical_text(const LogFile& log);
// Throws kMalformed, kUnknownRecordKind or the check_log errors.
LogFile parse_log(std::string_view text);

// The log is checked before any byte is written; the file is replaced
// atomically.
void write_log(const std::filesystem::path& path, const LogFile& log);
LogFile read_log(const std::filesystem::path& path);

// Equality after the float rounding applied by the on-disk form.
bool canonically_equal(const LogFile& a, const LogFile& b);

// Drops the prediction fields, giving the input record set of the run.
std::vector<InputDataRecord> project_inputs(
    const std::vector<PredictedDataRecord>& rows);

// "<method>.<kind>.json"
std::string log_file_name(const MethodId& method, RecordKind kind);

enum class ViolationKind {
  kDatasetMismatch,
  kRowSetMismatch,
  kGroundTruthMismatch,
  kDuplicateLog,
};

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string message;
  std::optional<RowId> row_id;
  std::optional<MethodId> method;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string summary() const;
};

// A set of logs from one dataset, several methods, both kinds.
class LogSet {
 public:
  LogSet() = default;
  explicit LogSet(std::vector<LogFile> logs) : logs_(std::move(logs)) {}

  void add(LogFile log) { logs_.push_back(std::move(log)); }

  const std::vector<LogFile>& logs() const noexcept { return logs_; }
  const LogFile* find(const MethodId& method, RecordKind kind) const;
  // Throws kUnknownMethod.
  const LogFile& require(const MethodId& method, RecordKind kind) const;
  std::vector<MethodId> methods(RecordKind kind) const;

 private:
  std::vector<LogFile> logs_;
};

// Same dataset everywhere, identical row sets across methods and kinds,
// one ground truth per row. Never throws; findings go into the report.
ValidationReport validate_log_set(const std::vector<LogFile>& logs);
inline ValidationReport validate_log_set(const LogSet& set) {
  return validate_log_set(set.logs());
}

// Reads every "*.input.json" / "*.predicted.json" file in `dir`.
LogSet load_log_dir(const std::filesystem::path& dir);

}  // namespace ertrace
