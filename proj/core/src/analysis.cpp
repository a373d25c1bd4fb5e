#include "ertrace/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ertrace {
namespace {

void check_same_space(const LogSet& logs, const MethodId& a, const MethodId& b) {
  const auto& log_a = logs.require(a, RecordKind::kPredicted);
  const auto& log_b = logs.require(b, RecordKind::kPredicted);
  const auto dim_a = log_a.header.hyperparameters.dim().has_value()
                         ? log_a.header.hyperparameters.dim()
                         : log_a.embedding_dim();
  const auto dim_b = log_b.header.hyperparameters.dim().has_value()
                         ? log_b.header.hyperparameters.dim()
                         : log_b.embedding_dim();
  if (dim_a && dim_b && *dim_a != *dim_b) {
    throw Error(ErrorCode::kDimensionMismatch,
                "'" + a.str() + "' embeds in " + std::to_string(*dim_a) + " dims, '" +
                    b.str() + "' in " + std::to_string(*dim_b));
  }
  const auto backend_a = log_a.header.hyperparameters.backend();
  const auto backend_b = log_b.header.hyperparameters.backend();
  if (backend_a && backend_b && *backend_a != *backend_b) {
    throw Error(ErrorCode::kBackendMismatch,
                "'" + a.str() + "' ran on backend '" + *backend_a + "', '" + b.str() +
                    "' on '" + *backend_b + "'");
  }
}

SimilarityReport build_report(TestId test, const std::vector<DeltaYRow>& rows) {
  SimilarityReport report;
  report.test = test;
  double sum = 0.0;
  for (const auto& row : rows) {
    const double c = cosine(row.embedding_a, row.embedding_b);
    report.rows.push_back({row.row_id, row.ground_truth, row.prediction_a,
                           row.prediction_b, c});
    sum += c;
  }
  if (!report.rows.empty()) report.average = sum / static_cast<double>(report.rows.size());
  return report;
}

RenderedEntry mark_against(const std::string& original, const std::string& text) {
  RenderedEntry out{text, {}};
  bool extending = false;
  for (const auto& entry : diff_tokens(original, text).entries) {
    if (entry.op == DiffOp::kInsert) {
      if (extending) {
        out.marks.back().end = entry.token.end;
      } else {
        out.marks.push_back({entry.token.start, entry.token.end});
      }
      extending = true;
    } else if (entry.op == DiffOp::kKeep) {
      extending = false;
    }
  }
  return out;
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size() || u.empty()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cosine of vectors with lengths " + std::to_string(u.size()) + " and " +
                    std::to_string(v.size()));
  }
  double uv = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw Error(ErrorCode::kZeroVector, "cosine of a zero vector");
  return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

double Ratio::value() const noexcept {
  return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

std::string Ratio::render(int decimals) const {
  if (total == 0) return "n/a";
  unsigned long long scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  // round(count * scale / total), half up, in integers.
  const unsigned long long scaled =
      (2ull * count * scale + total) / (2ull * static_cast<unsigned long long>(total));
  std::string digits = std::to_string(scaled % scale);
  digits.insert(0, static_cast<std::size_t>(decimals) - digits.size(), '0');
  std::string out = std::to_string(scaled / scale);
  if (decimals > 0) out += "." + digits;
  return out;
}

AgreementTable agreement_table(const LogSet& logs, const MethodId& method_a,
                               const MethodId& method_b, const MethodId& baseline) {
  const auto& rows_a = logs.require(method_a, RecordKind::kPredicted).predictions();
  const auto& rows_b = logs.require(method_b, RecordKind::kPredicted).predictions();
  if (logs.find(baseline, RecordKind::kPredicted) == nullptr) {
    throw Error(ErrorCode::kUnknownBaseline,
                "no predicted log for baseline '" + baseline.str() + "'");
  }

  std::map<RowId, const PredictedDataRecord*> by_row;
  for (const auto& r : rows_b) by_row.emplace(r.row_id(), &r);
  std::size_t shared = 0;
  std::size_t tf = 0;
  std::size_t ft = 0;
  for (const auto& a : rows_a) {
    auto it = by_row.find(a.row_id());
    if (it == by_row.end()) continue;
    ++shared;
    const bool a_right = a.predicted == a.input.ground_truth;
    const bool b_right = it->second->predicted == it->second->input.ground_truth;
    if (a_right && !b_right) ++tf;
    if (!a_right && b_right) ++ft;
  }
  const std::size_t tt = delta_y_same_correct(logs, method_a, method_b, baseline).size();

  return {method_a, method_b, baseline, shared,
          {tf, shared}, {ft, shared}, {tt, shared}};
}

std::string_view to_string(TestId test) noexcept {
  return test == TestId::kTestI ? "Test I" : "Test II";
}

std::optional<double> SimilarityReport::average_for(MatchLabel ground_truth) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : rows) {
    if (row.ground_truth != ground_truth) continue;
    sum += row.cosine;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

SimilarityByTest similarity_by_test(const LogSet& logs, const MethodId& method_a,
                                    const MethodId& method_b, const MethodId& baseline) {
  check_same_space(logs, method_a, method_b);
  return {build_report(TestId::kTestI, delta_y_diff(logs, method_a, method_b)),
          build_report(TestId::kTestII,
                       delta_y_same_correct(logs, method_a, method_b, baseline))};
}

std::vector<CaseStudyReport> case_study_report(const LogSet& logs,
                                               std::span<const RowId> row_ids,
                                               std::span<const MethodId> methods,
                                               const MethodId& original) {
  const auto index = [](const std::vector<InputDataRecord>& rows) {
    std::map<RowId, const InputDataRecord*> out;
    for (const auto& r : rows) out.emplace(r.row_id, &r);
    return out;
  };
  const auto original_rows = index(logs.require(original, RecordKind::kInput).inputs());

  struct MethodView {
    MethodId method;
    std::map<RowId, const InputDataRecord*> inputs;
    std::map<RowId, const PredictedDataRecord*> predictions;
  };
  std::vector<MethodView> views;
  for (const auto& method : methods) {
    MethodView view{method, index(logs.require(method, RecordKind::kInput).inputs()), {}};
    if (const auto* predicted = logs.find(method, RecordKind::kPredicted)) {
      for (const auto& r : predicted->predictions()) view.predictions.emplace(r.row_id(), &r);
    }
    views.push_back(std::move(view));
  }

  std::vector<RowId> missing;
  for (RowId row : row_ids) {
    bool present = original_rows.contains(row);
    for (const auto& view : views) present = present && view.inputs.contains(row);
    if (!present) missing.push_back(row);
  }
  if (!missing.empty()) {
    std::string list;
    for (RowId row : missing) list += (list.empty() ? "" : ", ") + std::to_string(row);
    throw Error(ErrorCode::kUnknownRow, "rows not in every requested log: " + list);
  }

  std::vector<CaseStudyReport> reports;
  for (RowId row : row_ids) {
    const auto& base = *original_rows.at(row);
    CaseStudyReport report{row, base.ground_truth, {}, {}};
    for (const auto& view : views) {
      const auto& input = *view.inputs.at(row);
      MethodRendering rendering{view.method, mark_against(base.left_entry, input.left_entry),
                                mark_against(base.right_entry, input.right_entry),
                                std::nullopt, std::nullopt};
      if (auto it = view.predictions.find(row); it != view.predictions.end()) {
        rendering.predicted = it->second->predicted;
        rendering.confidence = it->second->confidence;
      }
      report.methods.push_back(std::move(rendering));
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "html") return ReportFormat::kHtml;
  throw Error(ErrorCode::kInvalidArgument, "unknown format '" + std::string(name) + "'");
}

}  // namespace ertrace
