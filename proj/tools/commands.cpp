#include "commands.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <ertrace/canonical_json.hpp>
#include <ertrace/ingest.hpp>
#include <ertrace/matcher.hpp>
#include <ertrace/tq_query.hpp>

#include "run_config.hpp"

namespace ertrace::cli {
namespace {

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

Error staged(const Error& e, const std::string& stage) {
  Error out = e;
  if (out.stage().empty()) out.in_stage(stage);
  return out;
}

const MethodId& need(const std::optional<MethodId>& value, const char* flag,
                     const char* question) {
  if (!value) throw UsageError(std::string(question) + " needs " + flag);
  return *value;
}

}  // namespace

std::vector<std::filesystem::path> cmd_run(const RunOptions& options) {
  RunConfig config = load_run_config(options.config);
  if (options.output_dir) config.output_dir = *options.output_dir;

  std::vector<std::filesystem::path> targets;
  for (const auto& method : config.methods) {
    for (auto kind : {RecordKind::kInput, RecordKind::kPredicted}) {
      targets.push_back(config.output_dir / log_file_name(method.name, kind));
    }
  }
  if (!options.force) {
    for (const auto& path : targets) {
      if (std::filesystem::exists(path)) {
        throw UsageError(path.string() + " already exists; pass --force to overwrite");
      }
    }
  }

  std::vector<CandidatePair> pairs;
  try {
    pairs = to_candidate_pairs(load_magellan(config.dataset_dir), config.split);
  } catch (const Error& e) {
    throw staged(e, "ingest");
  }
  spdlog::info("loaded {} pairs from {} split '{}'", pairs.size(),
               config.dataset_dir.string(), config.split);

  std::unique_ptr<MatcherBackend> backend;
  try {
    backend = make_backend(config.backend);
  } catch (const Error& e) {
    throw staged(e, "backend");
  }
  const std::string created_at = config.created_at.value_or(utc_now());
  std::filesystem::create_directories(config.output_dir);

  std::vector<std::filesystem::path> written;
  for (const auto& method : config.methods) {
    std::unique_ptr<Annotator> column_annotator;
    std::unique_ptr<Annotator> entity_annotator;
    if (method.column_annotator) {
      column_annotator = make_annotator(*method.column_annotator, AnnotatorKind::kColumn);
    }
    if (method.entity_annotator) {
      entity_annotator = make_annotator(*method.entity_annotator, AnnotatorKind::kEntity);
    }

    Hyperparameters hp = backend->describe();
    hp.merge(config.extra_hyperparameters);
    hp.set("prompt_style", std::string(to_string(method.style)));
    hp.set("annotator_digest", annotator_digest(method));
    hp.set("split", config.split);

    ExperimentSetup setup;
    setup.dataset_name = config.dataset_name;
    setup.method = method.name;
    setup.column_annotator = column_annotator.get();
    setup.entity_annotator = entity_annotator.get();
    setup.style = method.style;
    setup.workers = config.workers;

    spdlog::info("running method '{}'", method.name.str());
    auto records = run_experiment(pairs, setup, *backend, hp);

    LogHeader header{config.dataset_name, method.name, RecordKind::kInput, Hyperparameters{},
                     created_at};
    const auto input_path = config.output_dir / log_file_name(method.name, RecordKind::kInput);
    write_log(input_path, LogFile::input(header, std::move(records.inputs)));
    written.push_back(input_path);

    header.record_kind = RecordKind::kPredicted;
    header.hyperparameters = hp;
    const auto predicted_path =
        config.output_dir / log_file_name(method.name, RecordKind::kPredicted);
    write_log(predicted_path, LogFile::predicted(header, std::move(records.predictions)));
    written.push_back(predicted_path);
    spdlog::debug("wrote {} and {}", input_path.string(), predicted_path.string());
  }
  return written;
}

Question question_from_string(std::string_view name) {
  if (name == "tq1") return Question::kXToY;
  if (name == "tq2") return Question::kDeltaX;
  if (name == "tq3-diff") return Question::kDeltaYDiff;
  if (name == "tq3-same") return Question::kDeltaYSameCorrect;
  throw UsageError("unknown question '" + std::string(name) +
                   "' (expected tq1, tq2, tq3-diff or tq3-same)");
}

LogSet load_validated(const std::filesystem::path& dir) {
  LogSet logs = load_log_dir(dir);
  const auto report = validate_log_set(logs);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvariantViolation,
                "log set in " + dir.string() + " failed validation:\n" + report.summary());
  }
  spdlog::debug("validated {} logs in {}", logs.logs().size(), dir.string());
  return logs;
}

std::string cmd_query(const QueryOptions& options) {
  if (options.format != ReportFormat::kCsv && options.format != ReportFormat::kJson) {
    throw UsageError("query output format must be csv or json");
  }
  if (options.baseline && options.question != Question::kDeltaYSameCorrect) {
    throw UsageError("--baseline only applies to tq3-same");
  }
  const bool csv = options.format == ReportFormat::kCsv;
  const auto emit = [csv](const auto& rows) {
    return csv ? to_csv(std::span(rows)) : to_json(std::span(rows));
  };

  switch (options.question) {
    case Question::kXToY: {
      const auto& method = need(options.method, "--method", "tq1");
      return emit(x_to_y(load_validated(options.logs), method));
    }
    case Question::kDeltaX: {
      const auto& a = need(options.a, "--a", "tq2");
      const auto& b = need(options.b, "--b", "tq2");
      return emit(delta_x(load_validated(options.logs), a, b));
    }
    case Question::kDeltaYDiff: {
      const auto& a = need(options.a, "--a", "tq3-diff");
      const auto& b = need(options.b, "--b", "tq3-diff");
      return emit(delta_y_diff(load_validated(options.logs), a, b));
    }
    case Question::kDeltaYSameCorrect: {
      const auto& a = need(options.a, "--a", "tq3-same");
      const auto& b = need(options.b, "--b", "tq3-same");
      return emit(delta_y_same_correct(load_validated(options.logs), a, b, options.baseline));
    }
  }
  throw UsageError("unknown question");
}

std::string render_analysis(const AgreementTable& table, const SimilarityByTest& similarity,
                            ReportFormat format) {
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    doc["agreement"] = nlohmann::ordered_json::parse(render_agreement(table, format));
    doc["similarity"] = nlohmann::ordered_json::parse(render_similarity(similarity, format));
    return to_canonical_json(doc);
  }
  if (format == ReportFormat::kHtml) throw UsageError("analyze output format must be text, csv or json");
  return render_agreement(table, format) + "\n" + render_similarity(similarity, format);
}

std::string cmd_analyze(const AnalyzeOptions& options) {
  if (options.format == ReportFormat::kHtml) {
    throw UsageError("analyze output format must be text, csv or json");
  }
  const LogSet logs = load_validated(options.logs);
  const auto table = agreement_table(logs, options.a, options.b, options.baseline);
  const auto similarity = similarity_by_test(logs, options.a, options.b, options.baseline);
  return render_analysis(table, similarity, options.format);
}

std::string cmd_report(const ReportOptions& options) {
  if (options.format == ReportFormat::kJson) {
    throw UsageError("report output format must be text, csv or html");
  }
  if (options.rows.empty()) throw UsageError("--rows names no rows");
  if (options.methods.empty()) throw UsageError("--methods names no methods");
  const LogSet logs = load_validated(options.logs);
  const auto reports = case_study_report(logs, options.rows, options.methods, options.original);
  return render_case_studies(reports, options.format);
}

void configure_logging(std::ostream& err) {
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("ERTRACE_LOG_LEVEL"); env && *env) {
    const std::string name(env);
    if (name == "error") {
      level = spdlog::level::err;
    } else if (name == "warn") {
      level = spdlog::level::warn;
    } else if (name == "info") {
      level = spdlog::level::info;
    } else if (name == "debug") {
      level = spdlog::level::debug;
    } else {
      throw UsageError("ERTRACE_LOG_LEVEL must be error, warn, info or debug, not '" + name +
                       "'");
    }
  }
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto logger = std::make_shared<spdlog::logger>("ertrace", std::move(sink));
  logger->set_pattern("ertrace: %l: %v");
  logger->set_level(level);
  spdlog::set_default_logger(std::move(logger));
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Provenance-preserving entity resolution experiments", "ertrace"};
  app.require_subcommand(1);

  RunOptions run;
  std::string run_output_dir;
  auto* run_cmd = app.add_subcommand("run", "Run every method of a config and write logs");
  run_cmd->add_option("config", run.config, "Run configuration file")->required();
  run_cmd->add_option("--output-dir", run_output_dir, "Override the config's output_dir");
  run_cmd->add_flag("--force", run.force, "Overwrite existing logs");

  QueryOptions query;
  std::string question, query_format = "csv", query_out;
  std::string q_method, q_a, q_b, q_baseline;
  auto* query_cmd = app.add_subcommand("query", "Answer a transparency question over logs");
  query_cmd->add_option("--logs", query.logs, "Log directory")->required();
  query_cmd->add_option("--question", question, "tq1, tq2, tq3-diff or tq3-same")->required();
  query_cmd->add_option("--method", q_method, "Method for tq1");
  query_cmd->add_option("--a", q_a, "First method");
  query_cmd->add_option("--b", q_b, "Second method");
  query_cmd->add_option("--baseline", q_baseline, "Baseline filter for tq3-same");
  query_cmd->add_option("--format", query_format, "csv or json");
  query_cmd->add_option("--out", query_out, "Write to this file instead of stdout");

  AnalyzeOptions analyze;
  std::string a_a, a_b, a_baseline, analyze_format = "text";
  auto* analyze_cmd = app.add_subcommand("analyze", "Agreement table and similarity tests");
  analyze_cmd->add_option("--logs", analyze.logs, "Log directory")->required();
  analyze_cmd->add_option("--a", a_a, "First method")->required();
  analyze_cmd->add_option("--b", a_b, "Second method")->required();
  analyze_cmd->add_option("--baseline", a_baseline, "Baseline method")->required();
  analyze_cmd->add_option("--format", analyze_format, "text, csv or json");

  ReportOptions report;
  std::vector<RowId> r_rows;
  std::vector<std::string> r_methods;
  std::string r_original = "original", report_format = "text";
  auto* report_cmd = app.add_subcommand("report", "Case-study reports for chosen rows");
  report_cmd->add_option("--logs", report.logs, "Log directory")->required();
  report_cmd->add_option("--rows", r_rows, "Comma-separated row ids")
      ->required()
      ->delimiter(',');
  report_cmd->add_option("--methods", r_methods, "Comma-separated methods")
      ->required()
      ->delimiter(',');
  report_cmd->add_option("--original", r_original, "Method the marks are diffed against");
  report_cmd->add_option("--format", report_format, "text, csv or html");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    configure_logging(err);
    if (*run_cmd) {
      if (!run_output_dir.empty()) run.output_dir = run_output_dir;
      for (const auto& path : cmd_run(run)) out << "wrote " << path.string() << '\n';
    } else if (*query_cmd) {
      query.question = question_from_string(question);
      query.format = report_format_from_string(query_format);
      if (!q_method.empty()) query.method = MethodId(q_method);
      if (!q_a.empty()) query.a = MethodId(q_a);
      if (!q_b.empty()) query.b = MethodId(q_b);
      if (!q_baseline.empty()) query.baseline = MethodId(q_baseline);
      const auto text = cmd_query(query);
      if (query_out.empty()) {
        out << text;
      } else {
        std::ofstream file(query_out, std::ios::binary);
        if (!file || !(file << text)) {
          throw Error(ErrorCode::kIo, "cannot write " + query_out);
        }
      }
    } else if (*analyze_cmd) {
      analyze.a = MethodId(a_a);
      analyze.b = MethodId(a_b);
      analyze.baseline = MethodId(a_baseline);
      analyze.format = report_format_from_string(analyze_format);
      out << cmd_analyze(analyze);
    } else if (*report_cmd) {
      report.rows = r_rows;
      for (const auto& m : r_methods) report.methods.emplace_back(m);
      report.original = MethodId(r_original);
      report.format = report_format_from_string(report_format);
      out << cmd_report(report);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "ertrace: usage: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "ertrace: " << e.describe() << '\n';
    const bool usage =
        e.code() == ErrorCode::kInvalidConfig || e.code() == ErrorCode::kInvalidArgument;
    return usage ? 2 : 1;
  } catch (const std::exception& e) {
    err << "ertrace: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ertrace::cli
