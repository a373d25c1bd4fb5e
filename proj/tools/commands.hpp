#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <ertrace/analysis.hpp>
#include <ertrace/provenance_log.hpp>

namespace ertrace::cli {

// Raised for misuse the caller can fix by changing the invocation; mapped
// to exit status 2 alongside kInvalidConfig and kInvalidArgument errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> output_dir;
  bool force = false;
};

// Paths of the logs written, input before predicted, per method in config
// order.
std::vector<std::filesystem::path> cmd_run(const RunOptions& options);

enum class Question { kXToY, kDeltaX, kDeltaYDiff, kDeltaYSameCorrect };
Question question_from_string(std::string_view name);

struct QueryOptions {
  std::filesystem::path logs;
  Question question = Question::kXToY;
  std::optional<MethodId> method;  // tq1
  std::optional<MethodId> a;
  std::optional<MethodId> b;
  std::optional<MethodId> baseline;  // tq3-same only
  ReportFormat format = ReportFormat::kCsv;
};

struct AnalyzeOptions {
  std::filesystem::path logs;
  MethodId a;
  MethodId b;
  MethodId baseline;
  ReportFormat format = ReportFormat::kText;
};

struct ReportOptions {
  std::filesystem::path logs;
  std::vector<RowId> rows;
  std::vector<MethodId> methods;
  MethodId original{"original"};
  ReportFormat format = ReportFormat::kText;
};

// Loads a log directory and refuses it unless it validates as a set.
LogSet load_validated(const std::filesystem::path& dir);

std::string cmd_query(const QueryOptions& options);
std::string cmd_analyze(const AnalyzeOptions& options);
std::string cmd_report(const ReportOptions& options);

// Agreement table followed by the similarity reports, in one document.
std::string render_analysis(const AgreementTable& table, const SimilarityByTest& similarity,
                            ReportFormat format);

// Routes the default spdlog logger to `err` at the level named by
// ERTRACE_LOG_LEVEL (error, warn, info, debug; default warn). Throws
// UsageError for any other value.
void configure_logging(std::ostream& err);

// Full command line: parses argv, runs the command, writes the result to
// `out` and diagnostics to `err`. Returns 0, 1 (runtime or data error) or
// 2 (usage or configuration error).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ertrace::cli
