#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ertrace/provenance_log.hpp"
#include "ertrace/tq_query.hpp"

namespace ertrace {

// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Throws kDimensionMismatch for
// unequal or empty lengths and kZeroVector when either norm is zero.
double cosine(std::span<const double> u, std::span<const double> v);

// count / total kept as integers so ratio * total == count holds exactly.
struct Ratio {
  std::size_t count = 0;
  std::size_t total = 0;

  double value() const noexcept;
  // Fixed-point decimal, rounded half up ("0.0012"); "n/a" when total is 0.
  std::string render(int decimals = 4) const;

  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Counts of rows where method_a is right and method_b wrong (T,F), the
// reverse (F,T), and both right while the baseline is wrong (T,T), each
// over the rows the two methods share.
struct AgreementTable {
  MethodId method_a;
  MethodId method_b;
  MethodId baseline;
  std::size_t total_rows = 0;
  Ratio true_false;
  Ratio false_true;
  Ratio true_true;
};

AgreementTable agreement_table(const LogSet& logs, const MethodId& method_a,
                               const MethodId& method_b, const MethodId& baseline);

enum class TestId { kTestI, kTestII };
std::string_view to_string(TestId test) noexcept;

struct SimilarityRow {
  RowId row_id = 0;
  MatchLabel ground_truth = MatchLabel::kNotMatch;
  MatchLabel prediction_a = MatchLabel::kNotMatch;
  MatchLabel prediction_b = MatchLabel::kNotMatch;
  double cosine = 0.0;
};

struct SimilarityReport {
  TestId test = TestId::kTestI;
  std::vector<SimilarityRow> rows;
  // Mean over rows; nullopt for an empty test.
  std::optional<double> average;

  std::optional<double> average_for(MatchLabel ground_truth) const;
};

struct SimilarityByTest {
  SimilarityReport test_i;   // methods disagree
  SimilarityReport test_ii;  // both right, baseline wrong
};

// Cosine between the two methods' embeddings on each row of the tq3
// result sets. Refuses (kDimensionMismatch / kBackendMismatch) to compare
// embeddings that do not share a space.
SimilarityByTest similarity_by_test(const LogSet& logs, const MethodId& method_a,
                                    const MethodId& method_b, const MethodId& baseline);

struct MarkedSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  friend bool operator==(const MarkedSpan&, const MarkedSpan&) = default;
};

struct RenderedEntry {
  std::string text;
  std::vector<MarkedSpan> marks;  // tokens absent from the original rendering
};

struct MethodRendering {
  MethodId method;
  RenderedEntry left;
  RenderedEntry right;
  std::optional<MatchLabel> predicted;
  std::optional<double> confidence;
};

struct CaseStudyReport {
  RowId row_id = 0;
  MatchLabel ground_truth = MatchLabel::kNotMatch;
  std::vector<MethodRendering> methods;
  std::string notes;  // free text for the curator
};

// One report per requested row, in request order. Marks come from the
// token diff against `original`'s input log. Throws kUnknownRow listing
// every missing id, or kUnknownMethod.
std::vector<CaseStudyReport> case_study_report(const LogSet& logs,
                                               std::span<const RowId> row_ids,
                                               std::span<const MethodId> methods,
                                               const MethodId& original);

enum class ReportFormat { kText, kCsv, kJson, kHtml };
// Throws kInvalidArgument for an unknown name.
ReportFormat report_format_from_string(std::string_view name);

// kText, kCsv and kJson are supported for the quantitative artifacts.
std::string render_agreement(const AgreementTable& table, ReportFormat format);
std::string render_similarity(const SimilarityByTest& report, ReportFormat format);
// kText, kCsv and kHtml; HTML wraps marked spans in <em>.
std::string render_case_studies(std::span<const CaseStudyReport> reports,
                                ReportFormat format);

}  // namespace ertrace
