#include "ertrace/provenance_log.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ertrace/canonical_json.hpp"

namespace ertrace {
namespace {

using Json = nlohmann::ordered_json;

const std::string& dataset_of(const InputDataRecord& r) { return r.dataset_name; }
const std::string& dataset_of(const PredictedDataRecord& r) {
  return r.input.dataset_name;
}
const MethodId& method_of(const InputDataRecord& r) { return r.method; }
const MethodId& method_of(const PredictedDataRecord& r) { return r.input.method; }
RowId row_of(const InputDataRecord& r) { return r.row_id; }
RowId row_of(const PredictedDataRecord& r) { return r.input.row_id; }
MatchLabel truth_of(const InputDataRecord& r) { return r.ground_truth; }
MatchLabel truth_of(const PredictedDataRecord& r) { return r.input.ground_truth; }

template <typename Record>
void check_rows(const LogHeader& header, const std::vector<Record>& rows) {
  std::set<RowId> seen;
  for (const auto& row : rows) {
    if (!seen.insert(row_of(row)).second) {
      throw Error(ErrorCode::kDuplicateRow,
                  "row " + std::to_string(row_of(row)) + " appears twice");
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (dataset_of(rows[i]) != header.dataset_name ||
        method_of(rows[i]) != header.method) {
      throw Error(ErrorCode::kInvariantViolation,
                  "row " + std::to_string(row_of(rows[i])) +
                      " does not match the header's dataset/method");
    }
    if (i > 0 && row_of(rows[i]) <= row_of(rows[i - 1])) {
      throw Error(ErrorCode::kInvariantViolation,
                  "row ids not strictly increasing at row " +
                      std::to_string(row_of(rows[i])));
    }
  }
}

const Json& field(const Json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw Error(ErrorCode::kMalformed, std::string("missing key '") + key + "'");
  }
  return *it;
}

std::string string_field(const Json& object, const char* key) {
  const auto& value = field(object, key);
  if (!value.is_string()) {
    throw Error(ErrorCode::kMalformed, std::string("'") + key + "' must be a string");
  }
  return value.get<std::string>();
}

long long integer_field(const Json& object, const char* key) {
  const auto& value = field(object, key);
  if (!value.is_number_integer()) {
    throw Error(ErrorCode::kMalformed, std::string("'") + key + "' must be an integer");
  }
  return value.get<long long>();
}

double number_field(const Json& object, const char* key) {
  const auto& value = field(object, key);
  if (!value.is_number()) {
    throw Error(ErrorCode::kMalformed, std::string("'") + key + "' must be a number");
  }
  return value.get<double>();
}

void reject_unknown_keys(const Json& object, std::initializer_list<std::string_view> keys,
                         const char* where) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw Error(ErrorCode::kMalformed,
                  std::string("unknown key '") + key + "' in " + where);
    }
  }
}

Json row_json(const InputDataRecord& r) {
  Json row = Json::object();
  row["row_id"] = r.row_id;
  row["left_entry"] = r.left_entry;
  row["right_entry"] = r.right_entry;
  row["ground_truth"] = to_code(r.ground_truth);
  return row;
}

Json row_json(const PredictedDataRecord& r) {
  Json row = row_json(r.input);
  row["predicted"] = to_code(r.predicted);
  row["confidence"] = r.confidence;
  Json embedding = Json::array();
  for (double v : r.embedding) embedding.push_back(v);
  row["embedding"] = std::move(embedding);
  return row;
}

InputDataRecord parse_input_row(const Json& row, const LogHeader& header) {
  if (!row.is_object()) throw Error(ErrorCode::kMalformed, "row must be an object");
  const auto row_id = integer_field(row, "row_id");
  if (row_id < 0) throw Error(ErrorCode::kMalformed, "negative row_id");
  return {header.dataset_name,
          header.method,
          static_cast<RowId>(row_id),
          string_field(row, "left_entry"),
          string_field(row, "right_entry"),
          label_from_code(integer_field(row, "ground_truth"))};
}

}  // namespace

std::string_view to_string(RecordKind kind) noexcept {
  return kind == RecordKind::kInput ? "input" : "predicted";
}

RecordKind record_kind_from_string(std::string_view name) {
  if (name == "input") return RecordKind::kInput;
  if (name == "predicted") return RecordKind::kPredicted;
  throw Error(ErrorCode::kUnknownRecordKind,
              "unknown record_kind '" + std::string(name) + "'");
}

LogFile LogFile::input(LogHeader header, std::vector<InputDataRecord> rows) {
  header.record_kind = RecordKind::kInput;
  return {std::move(header), std::move(rows)};
}

LogFile LogFile::predicted(LogHeader header, std::vector<PredictedDataRecord> rows) {
  header.record_kind = RecordKind::kPredicted;
  return {std::move(header), std::move(rows)};
}

std::size_t LogFile::size() const noexcept {
  return std::visit([](const auto& rows) { return rows.size(); }, records);
}

const std::vector<InputDataRecord>& LogFile::inputs() const {
  if (const auto* rows = std::get_if<std::vector<InputDataRecord>>(&records)) {
    return *rows;
  }
  throw Error(ErrorCode::kInvariantViolation,
              "log for '" + header.method.str() + "' holds predicted records");
}

const std::vector<PredictedDataRecord>& LogFile::predictions() const {
  if (const auto* rows = std::get_if<std::vector<PredictedDataRecord>>(&records)) {
    return *rows;
  }
  throw Error(ErrorCode::kInvariantViolation,
              "log for '" + header.method.str() + "' holds input records");
}

std::optional<std::size_t> LogFile::embedding_dim() const {
  const auto* rows = std::get_if<std::vector<PredictedDataRecord>>(&records);
  if (rows == nullptr || rows->empty()) return std::nullopt;
  return rows->front().embedding.size();
}

void check_log(const LogFile& log) {
  const auto& header = log.header;
  if (header.dataset_name.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "log has an empty dataset name");
  }
  if (header.method.empty()) {
    throw Error(ErrorCode::kInvariantViolation, "log has an empty method");
  }
  const bool holds_input = std::holds_alternative<std::vector<InputDataRecord>>(log.records);
  if (holds_input != (header.record_kind == RecordKind::kInput)) {
    throw Error(ErrorCode::kInvariantViolation,
                "records do not match record_kind '" +
                    std::string(to_string(header.record_kind)) + "'");
  }
  if (holds_input) {
    check_rows(header, log.inputs());
    return;
  }
  const auto& rows = log.predictions();
  check_rows(header, rows);
  const auto declared = header.hyperparameters.dim();
  std::optional<std::size_t> dim = declared;
  for (const auto& row : rows) {
    const auto here = row.embedding.size();
    if (dim && *dim != here) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "row " + std::to_string(row.row_id()) + " embedding has length " +
                      std::to_string(here) + ", expected " + std::to_string(*dim));
    }
    dim = here;
    if (!std::isfinite(row.confidence) || row.confidence < 0.0 || row.confidence > 1.0) {
      throw Error(ErrorCode::kContractViolation,
                  "row " + std::to_string(row.row_id()) + " confidence outside [0,1]");
    }
    for (double v : row.embedding) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kContractViolation,
                    "row " + std::to_string(row.row_id()) + " has a non-finite embedding");
      }
    }
  }
}

std::string to_canonical_text(const LogFile& log) {
  check_log(log);
  Json doc = Json::object();
  doc["dataset_name"] = log.header.dataset_name;
  doc["method"] = log.header.method.str();
  doc["record_kind"] = std::string(to_string(log.header.record_kind));
  doc["hyperparameters"] = log.header.hyperparameters.json();
  doc["created_at"] = log.header.created_at;
  Json rows = Json::array();
  std::visit(
      [&](const auto& records) {
        for (const auto& record : records) rows.push_back(row_json(record));
      },
      log.records);
  doc["rows"] = std::move(rows);
  return to_canonical_json(doc);
}

LogFile parse_log(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("log is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kMalformed, "log must be a JSON object");
  reject_unknown_keys(doc,
                      {"dataset_name", "method", "record_kind", "hyperparameters",
                       "created_at", "rows"},
                      "log header");

  LogHeader header;
  header.dataset_name = string_field(doc, "dataset_name");
  const auto method = string_field(doc, "method");
  if (method.empty()) throw Error(ErrorCode::kMalformed, "empty method");
  header.method = MethodId(method);
  header.record_kind = record_kind_from_string(string_field(doc, "record_kind"));
  const auto& hp = field(doc, "hyperparameters");
  if (!hp.is_object()) throw Error(ErrorCode::kMalformed, "hyperparameters must be an object");
  header.hyperparameters = Hyperparameters(hp);
  header.created_at = string_field(doc, "created_at");

  const auto& rows = field(doc, "rows");
  if (!rows.is_array()) throw Error(ErrorCode::kMalformed, "rows must be an array");

  LogFile log;
  if (header.record_kind == RecordKind::kInput) {
    std::vector<InputDataRecord> records;
    for (const auto& row : rows) {
      reject_unknown_keys(row, {"row_id", "left_entry", "right_entry", "ground_truth"},
                          "input row");
      records.push_back(parse_input_row(row, header));
    }
    log = LogFile::input(std::move(header), std::move(records));
  } else {
    std::vector<PredictedDataRecord> records;
    for (const auto& row : rows) {
      reject_unknown_keys(row,
                          {"row_id", "left_entry", "right_entry", "ground_truth",
                           "predicted", "confidence", "embedding"},
                          "predicted row");
      PredictedDataRecord record;
      record.input = parse_input_row(row, header);
      record.predicted = label_from_code(integer_field(row, "predicted"));
      record.confidence = number_field(row, "confidence");
      const auto& embedding = field(row, "embedding");
      if (!embedding.is_array()) throw Error(ErrorCode::kMalformed, "embedding must be an array");
      record.embedding.reserve(embedding.size());
      for (const auto& v : embedding) {
        if (!v.is_number()) throw Error(ErrorCode::kMalformed, "embedding values must be numbers");
        record.embedding.push_back(v.get<double>());
      }
      records.push_back(std::move(record));
    }
    log = LogFile::predicted(std::move(header), std::move(records));
  }
  check_log(log);
  return log;
}

void write_log(const std::filesystem::path& path, const LogFile& log) {
  const std::string text = to_canonical_text(log);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot open " + tmp.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::kIo, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::kIo, "cannot move log into place at " + path.string());
  }
}

LogFile read_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open log " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_log(buffer.str());
  } catch (Error& e) {
    throw Error(e.code(), path.filename().string() + ": " + e.what());
  }
}

bool canonically_equal(const LogFile& a, const LogFile& b) {
  return to_canonical_text(a) == to_canonical_text(b);
}

std::vector<InputDataRecord> project_inputs(const std::vector<PredictedDataRecord>& rows) {
  std::vector<InputDataRecord> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.input);
  return out;
}

std::string log_file_name(const MethodId& method, RecordKind kind) {
  return method.str() + "." + std::string(to_string(kind)) + ".json";
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::kDatasetMismatch: return "DatasetMismatch";
    case ViolationKind::kRowSetMismatch: return "RowSetMismatch";
    case ViolationKind::kGroundTruthMismatch: return "GroundTruthMismatch";
    case ViolationKind::kDuplicateLog: return "DuplicateLog";
  }
  return "Unknown";
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    out += to_string(v.kind);
    if (v.method) out += " [" + v.method->str() + "]";
    if (v.row_id) out += " row " + std::to_string(*v.row_id);
    out += ": " + v.message + "\n";
  }
  return out;
}

const LogFile* LogSet::find(const MethodId& method, RecordKind kind) const {
  for (const auto& log : logs_) {
    if (log.method() == method && log.kind() == kind) return &log;
  }
  return nullptr;
}

const LogFile& LogSet::require(const MethodId& method, RecordKind kind) const {
  if (const auto* log = find(method, kind)) return *log;
  throw Error(ErrorCode::kUnknownMethod,
              "no " + std::string(to_string(kind)) + " log for method '" +
                  method.str() + "'");
}

std::vector<MethodId> LogSet::methods(RecordKind kind) const {
  std::vector<MethodId> out;
  for (const auto& log : logs_) {
    if (log.kind() == kind) out.push_back(log.method());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ValidationReport validate_log_set(const std::vector<LogFile>& logs) {
  ValidationReport report;
  if (logs.empty()) return report;

  const auto& dataset = logs.front().header.dataset_name;
  std::set<std::pair<MethodId, RecordKind>> seen_logs;
  std::set<RowId> all_rows;
  std::vector<std::set<RowId>> row_sets;
  std::map<RowId, std::pair<MatchLabel, MethodId>> truths;
  std::set<RowId> truth_reported;

  for (const auto& log : logs) {
    if (log.header.dataset_name != dataset) {
      report.violations.push_back({ViolationKind::kDatasetMismatch,
                                   "dataset '" + log.header.dataset_name +
                                       "' differs from '" + dataset + "'",
                                   std::nullopt, log.method()});
    }
    if (!seen_logs.insert({log.method(), log.kind()}).second) {
      report.violations.push_back({ViolationKind::kDuplicateLog,
                                   "more than one " + std::string(to_string(log.kind())) +
                                       " log",
                                   std::nullopt, log.method()});
    }
    std::set<RowId> rows;
    std::visit(
        [&](const auto& records) {
          for (const auto& record : records) {
            const RowId row = row_of(record);
            rows.insert(row);
            auto [it, inserted] = truths.try_emplace(row, truth_of(record), log.method());
            if (!inserted && it->second.first != truth_of(record) &&
                truth_reported.insert(row).second) {
              report.violations.push_back(
                  {ViolationKind::kGroundTruthMismatch,
                   "ground truth differs between '" + it->second.second.str() +
                       "' and '" + log.method().str() + "'",
                   row, log.method()});
            }
          }
        },
        log.records);
    all_rows.insert(rows.begin(), rows.end());
    row_sets.push_back(std::move(rows));
  }

  for (std::size_t i = 0; i < logs.size(); ++i) {
    for (RowId row : all_rows) {
      if (!row_sets[i].contains(row)) {
        report.violations.push_back(
            {ViolationKind::kRowSetMismatch,
             std::string(to_string(logs[i].kind())) + " log lacks the row",
             row, logs[i].method()});
      }
    }
  }
  return report;
}

LogSet load_log_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kMissingFile, "log directory " + dir.string() + " not found");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& item : std::filesystem::directory_iterator(dir)) {
    const auto name = item.path().filename().string();
    if (item.is_regular_file() &&
        (name.ends_with(".input.json") || name.ends_with(".predicted.json"))) {
      files.push_back(item.path());
    }
  }
  std::sort(files.begin(), files.end());
  LogSet set;
  for (const auto& file : files) set.add(read_log(file));
  return set;
}

}  // namespace ertrace
