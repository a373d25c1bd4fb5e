#include <random>
#include <set>

#include <gtest/gtest.h>

#include <ertrace/provenance_log.hpp>

#include "expect_error.hpp"
#include "test_support.hpp"

using namespace ertrace;
using ertrace::testing::read_file;
using ertrace::testing::TempDir;
using ertrace::testing::write_file;

namespace {

LogHeader header(const char* method, RecordKind kind, std::size_t dim = 2) {
  LogHeader h;
  h.dataset_name = "dblp_acm";
  h.method = MethodId(method);
  h.record_kind = kind;
  h.created_at = "2026-01-01T00:00:00Z";
  if (kind == RecordKind::kPredicted) h.hyperparameters.set("backend", "builtin").set("dim", dim);
  return h;
}

InputDataRecord input(const char* method, RowId row, MatchLabel truth = MatchLabel::kMatch) {
  return {"dblp_acm", MethodId(method), row, "COL a VAL x", "COL a VAL y", truth};
}

PredictedDataRecord predicted(const char* method, RowId row, std::vector<double> embedding = {0.6, 0.8},
                              MatchLabel truth = MatchLabel::kMatch) {
  PredictedDataRecord r;
  r.input = input(method, row, truth);
  r.predicted = MatchLabel::kMatch;
  r.confidence = 0.75;
  r.embedding = std::move(embedding);
  return r;
}

}  // namespace

TEST(LogFormat, ExactBytes) {
  const auto log = LogFile::predicted(header("doduo", RecordKind::kPredicted),
                                      {predicted("doduo", 3)});
  EXPECT_EQ(to_canonical_text(log),
            "{\n"
            "  \"dataset_name\": \"dblp_acm\",\n"
            "  \"method\": \"doduo\",\n"
            "  \"record_kind\": \"predicted\",\n"
            "  \"hyperparameters\": {\n"
            "    \"backend\": \"builtin\",\n"
            "    \"dim\": 2\n"
            "  },\n"
            "  \"created_at\": \"2026-01-01T00:00:00Z\",\n"
            "  \"rows\": [\n"
            "    {\n"
            "      \"row_id\": 3,\n"
            "      \"left_entry\": \"COL a VAL x\",\n"
            "      \"right_entry\": \"COL a VAL y\",\n"
            "      \"ground_truth\": 1,\n"
            "      \"predicted\": 1,\n"
            "      \"confidence\": 0.75,\n"
            "      \"embedding\": [0.6, 0.8]\n"
            "    }\n"
            "  ]\n"
            "}\n");
}

TEST(LogFile, EmptyLogWritesHeaderAndEmptyRows) {
  TempDir dir;
  const auto log = LogFile::input(header("original", RecordKind::kInput), {});
  write_log(dir / "original.input.json", log);
  const auto text = read_file(dir / "original.input.json");
  EXPECT_NE(text.find("\"rows\": []"), std::string::npos);
  EXPECT_EQ(read_log(dir / "original.input.json"), log);
}

TEST(LogFile, RoundTripIsByteStable) {
  TempDir dir;
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto log = ertrace::testing::random_log(rng);
    const auto path = dir / "log.json";
    write_log(path, log);
    const auto first = read_file(path);
    const auto back = read_log(path);
    EXPECT_TRUE(canonically_equal(back, log));
    write_log(path, back);
    EXPECT_EQ(read_file(path), first);
  }
}

TEST(LogFile, DuplicateRowRefusedBeforeWriting) {
  TempDir dir;
  const auto log = LogFile::input(header("original", RecordKind::kInput),
                                  {input("original", 1), input("original", 1)});
  EXPECT_ERROR_CODE(write_log(dir / "x.json", log), ErrorCode::kDuplicateRow);
  EXPECT_FALSE(std::filesystem::exists(dir / "x.json"));
  EXPECT_TRUE(std::filesystem::is_empty(dir.path()));
}

TEST(LogFile, DecreasingRowsAndForeignMethodRejected) {
  EXPECT_ERROR_CODE(check_log(LogFile::input(header("original", RecordKind::kInput),
                                             {input("original", 2), input("original", 1)})),
                    ErrorCode::kInvariantViolation);
  EXPECT_ERROR_CODE(check_log(LogFile::input(header("original", RecordKind::kInput),
                                             {input("doduo", 1)})),
                    ErrorCode::kInvariantViolation);
}

TEST(LogFile, ConfidenceOutsideUnitInterval) {
  auto row = predicted("doduo", 0);
  row.confidence = 1.5;
  EXPECT_ERROR_CODE(check_log(LogFile::predicted(header("doduo", RecordKind::kPredicted), {row})),
                    ErrorCode::kContractViolation);
}

TEST(LogFile, TruncatedFileIsMalformed) {
  TempDir dir;
  const auto log = LogFile::input(header("original", RecordKind::kInput), {input("original", 0)});
  const auto text = to_canonical_text(log);
  write_file(dir / "t.json", text.substr(0, text.size() / 2));
  EXPECT_ERROR_CODE(read_log(dir / "t.json"), ErrorCode::kMalformed);
}

TEST(LogFile, EmbeddingLengthsMustAgree) {
  const auto log = LogFile::predicted(header("doduo", RecordKind::kPredicted),
                                      {predicted("doduo", 0), predicted("doduo", 1, {1, 0, 0})});
  EXPECT_ERROR_CODE(check_log(log), ErrorCode::kDimensionMismatch);
  // Also caught when reading text produced elsewhere.
  auto text = to_canonical_text(LogFile::predicted(header("doduo", RecordKind::kPredicted),
                                                   {predicted("doduo", 0), predicted("doduo", 1)}));
  const auto at = text.rfind("[0.6, 0.8]");
  text.replace(at, 10, "[0.6, 0.8, 0]");
  EXPECT_ERROR_CODE(parse_log(text), ErrorCode::kDimensionMismatch);
}

TEST(LogFile, HeaderDimensionChecked) {
  const auto log = LogFile::predicted(header("doduo", RecordKind::kPredicted, 3),
                                      {predicted("doduo", 0)});
  EXPECT_ERROR_CODE(check_log(log), ErrorCode::kDimensionMismatch);
}

TEST(LogFile, UnknownKindAndUnknownKeys) {
  auto text = to_canonical_text(LogFile::input(header("original", RecordKind::kInput), {}));
  auto bad_kind = text;
  bad_kind.replace(bad_kind.find("\"input\""), 7, "\"output\"");
  EXPECT_ERROR_CODE(parse_log(bad_kind), ErrorCode::kUnknownRecordKind);
  auto extra = text;
  extra.replace(extra.find("\"rows\""), 6, "\"extra\": 1, \"rows\"");
  EXPECT_ERROR_CODE(parse_log(extra), ErrorCode::kMalformed);
}

TEST(LogFile, NonBinaryGroundTruth) {
  auto text = to_canonical_text(
      LogFile::input(header("original", RecordKind::kInput), {input("original", 0)}));
  text.replace(text.find("\"ground_truth\": 1"), 17, "\"ground_truth\": 3");
  EXPECT_ERROR_CODE(parse_log(text), ErrorCode::kNonBinaryLabel);
}

TEST(LogFile, WrongKindAccessors) {
  const auto log = LogFile::input(header("original", RecordKind::kInput), {});
  EXPECT_ERROR_CODE(log.predictions(), ErrorCode::kInvariantViolation);
  EXPECT_EQ(log_file_name(MethodId("doduo_el"), RecordKind::kPredicted),
            "doduo_el.predicted.json");
}

TEST(Projection, PredictedRowsProjectOntoInputs) {
  std::mt19937_64 rng(4);
  const auto logs = ertrace::testing::random_log_set(rng, {40, 2, 3, 0.8});
  for (std::size_t i = 0; i < logs.size(); i += 2) {
    EXPECT_EQ(project_inputs(logs[i + 1].predictions()), logs[i].inputs());
  }
}

TEST(ValidateLogSet, ConsistentSetPasses) {
  std::vector<LogFile> logs;
  for (const char* m : {"original", "doduo"}) {
    logs.push_back(LogFile::input(header(m, RecordKind::kInput), {input(m, 0), input(m, 7)}));
    logs.push_back(
        LogFile::predicted(header(m, RecordKind::kPredicted), {predicted(m, 0), predicted(m, 7)}));
  }
  const auto report = validate_log_set(logs);
  EXPECT_TRUE(report.ok()) << report.summary();
}

TEST(ValidateLogSet, GroundTruthDisagreementNamesRow) {
  std::vector<LogFile> logs{
      LogFile::input(header("original", RecordKind::kInput),
                     {input("original", 0), input("original", 4)}),
      LogFile::input(header("doduo", RecordKind::kInput),
                     {input("doduo", 0), input("doduo", 4, MatchLabel::kNotMatch)})};
  const auto report = validate_log_set(logs);
  ASSERT_FALSE(report.ok());
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, ViolationKind::kGroundTruthMismatch);
  EXPECT_EQ(report.violations[0].row_id, 4u);
}

TEST(ValidateLogSet, MissingRowIsRowSetMismatch) {
  std::vector<LogFile> logs{
      LogFile::input(header("a", RecordKind::kInput), {input("a", 1), input("a", 7)}),
      LogFile::input(header("b", RecordKind::kInput), {input("b", 1)})};
  const auto report = validate_log_set(logs);
  ASSERT_FALSE(report.ok());
  bool named = false;
  for (const auto& v : report.violations) {
    if (v.kind == ViolationKind::kRowSetMismatch && v.row_id == 7u) named = true;
  }
  EXPECT_TRUE(named) << report.summary();
}

TEST(ValidateLogSet, DatasetAndDuplicateLogs) {
  auto other = header("b", RecordKind::kInput);
  other.dataset_name = "abt_buy";
  InputDataRecord row = input("b", 1);
  row.dataset_name = "abt_buy";
  std::vector<LogFile> logs{
      LogFile::input(header("a", RecordKind::kInput), {input("a", 1)}),
      LogFile::input(other, {row}),
      LogFile::input(header("a", RecordKind::kInput), {input("a", 1)})};
  const auto report = validate_log_set(logs);
  std::set<ViolationKind> kinds;
  for (const auto& v : report.violations) kinds.insert(v.kind);
  EXPECT_TRUE(kinds.contains(ViolationKind::kDatasetMismatch));
  EXPECT_TRUE(kinds.contains(ViolationKind::kDuplicateLog));
}

TEST(LogDir, LoadsBothKindsAndFindsByMethod) {
  TempDir dir;
  write_log(dir / "a.input.json", LogFile::input(header("a", RecordKind::kInput), {input("a", 0)}));
  write_log(dir / "a.predicted.json",
            LogFile::predicted(header("a", RecordKind::kPredicted), {predicted("a", 0)}));
  write_file(dir / "notes.txt", "ignored");
  const auto set = load_log_dir(dir.path());
  EXPECT_EQ(set.logs().size(), 2u);
  EXPECT_NE(set.find(MethodId("a"), RecordKind::kPredicted), nullptr);
  EXPECT_EQ(set.find(MethodId("b"), RecordKind::kPredicted), nullptr);
  EXPECT_ERROR_CODE(set.require(MethodId("b"), RecordKind::kInput), ErrorCode::kUnknownMethod);
  EXPECT_ERROR_CODE(load_log_dir(dir / "missing"), ErrorCode::kMissingFile);
}
