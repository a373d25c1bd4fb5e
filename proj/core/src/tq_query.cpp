#include "ertrace/tq_query.hpp"

#include "ertrace/canonical_json.hpp"

namespace ertrace {
namespace {

using Json = nlohmann::ordered_json;

RowId row_of(const InputDataRecord& r) { return r.row_id; }
RowId row_of(const PredictedDataRecord& r) { return r.input.row_id; }

// Merge join on row id; log rows are sorted by strictly increasing id.
template <typename A, typename B, typename Emit>
void join_on_row(const std::vector<A>& left, const std::vector<B>& right, Emit emit) {
  auto l = left.begin();
  auto r = right.begin();
  while (l != left.end() && r != right.end()) {
    if (row_of(*l) < row_of(*r)) {
      ++l;
    } else if (row_of(*r) < row_of(*l)) {
      ++r;
    } else {
      emit(*l, *r);
      ++l;
      ++r;
    }
  }
}

const std::vector<PredictedDataRecord>& predicted_rows(const LogSet& logs,
                                                       const MethodId& method) {
  return logs.require(method, RecordKind::kPredicted).predictions();
}

DeltaYRow make_delta_y(const PredictedDataRecord& a, const PredictedDataRecord& b,
                       Situation situation) {
  return {a.row_id(),       a.input.method, a.predicted,   a.embedding,
          b.input.method,   b.predicted,    b.embedding,   a.input.ground_truth,
          situation};
}

std::string join_embedding(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ' ';
    out += format_float(values[i]);
  }
  return out;
}

Json embedding_json(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(v);
  return out;
}

Json diff_json(const TokenDiff& diff) {
  Json inserted = Json::array();
  Json deleted = Json::array();
  for (const auto& t : diff.inserted()) inserted.push_back(t.text);
  for (const auto& t : diff.deleted()) deleted.push_back(t.text);
  Json out = Json::object();
  out["inserted"] = std::move(inserted);
  out["deleted"] = std::move(deleted);
  return out;
}

}  // namespace

std::string_view to_string(Situation situation) noexcept {
  return situation == Situation::kDifferent ? "different" : "same_correct";
}

std::vector<XToYRow> x_to_y(const LogSet& logs, const MethodId& method) {
  std::vector<XToYRow> out;
  for (const auto& r : predicted_rows(logs, method)) {
    out.push_back({r.row_id(), r.input.method, r.input.left_entry, r.input.right_entry,
                   r.input.ground_truth, r.predicted});
  }
  return out;
}

std::vector<DeltaXRow> delta_x(const LogSet& logs, const MethodId& method_a,
                               const MethodId& method_b) {
  const auto& rows_a = logs.require(method_a, RecordKind::kInput).inputs();
  const auto& rows_b = logs.require(method_b, RecordKind::kInput).inputs();
  std::vector<DeltaXRow> out;
  join_on_row(rows_a, rows_b, [&](const InputDataRecord& a, const InputDataRecord& b) {
    out.push_back({a.row_id, a.method, a.left_entry, a.right_entry, b.method,
                   b.left_entry, b.right_entry, diff_tokens(a.left_entry, b.left_entry),
                   diff_tokens(a.right_entry, b.right_entry)});
  });
  if (out.size() != rows_a.size() || out.size() != rows_b.size()) {
    throw Error(ErrorCode::kRowSetMismatch,
                "'" + method_a.str() + "' and '" + method_b.str() +
                    "' input logs cover different rows");
  }
  return out;
}

std::vector<DeltaYRow> delta_y_diff(const LogSet& logs, const MethodId& method_a,
                                    const MethodId& method_b) {
  std::vector<DeltaYRow> out;
  join_on_row(predicted_rows(logs, method_a), predicted_rows(logs, method_b),
              [&](const PredictedDataRecord& a, const PredictedDataRecord& b) {
                if (a.predicted != b.predicted) {
                  out.push_back(make_delta_y(a, b, Situation::kDifferent));
                }
              });
  return out;
}

std::vector<DeltaYRow> delta_y_same_correct(const LogSet& logs,
                                            const MethodId& method_a,
                                            const MethodId& method_b,
                                            const std::optional<MethodId>& baseline) {
  const std::vector<PredictedDataRecord>* baseline_rows = nullptr;
  if (baseline) {
    const auto* log = logs.find(*baseline, RecordKind::kPredicted);
    if (log == nullptr) {
      throw Error(ErrorCode::kUnknownBaseline,
                  "no predicted log for baseline '" + baseline->str() + "'");
    }
    baseline_rows = &log->predictions();
  }

  std::vector<DeltaYRow> both_correct;
  join_on_row(predicted_rows(logs, method_a), predicted_rows(logs, method_b),
              [&](const PredictedDataRecord& a, const PredictedDataRecord& b) {
                if (a.predicted == b.predicted && a.predicted == a.input.ground_truth) {
                  both_correct.push_back(make_delta_y(a, b, Situation::kSameCorrect));
                }
              });
  if (baseline_rows == nullptr) return both_correct;

  std::vector<DeltaYRow> out;
  auto base = baseline_rows->begin();
  for (auto& row : both_correct) {
    while (base != baseline_rows->end() && base->row_id() < row.row_id) ++base;
    if (base != baseline_rows->end() && base->row_id() == row.row_id &&
        base->predicted != base->input.ground_truth) {
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string to_csv(std::span<const XToYRow> rows) {
  std::string out = "row_id,method,left_entry,right_entry,ground_truth,predicted\n";
  for (const auto& r : rows) {
    out += std::to_string(r.row_id) + ',' + csv_field(r.method.str()) + ',' +
           csv_field(r.left_entry) + ',' + csv_field(r.right_entry) + ',' +
           std::to_string(to_code(r.ground_truth)) + ',' +
           std::to_string(to_code(r.predicted)) + '\n';
  }
  return out;
}

std::string to_csv(std::span<const DeltaXRow> rows) {
  std::string out =
      "row_id,method_a,left_a,right_a,method_b,left_b,right_b,left_diff,right_diff\n";
  for (const auto& r : rows) {
    out += std::to_string(r.row_id) + ',' + csv_field(r.method_a.str()) + ',' +
           csv_field(r.left_a) + ',' + csv_field(r.right_a) + ',' +
           csv_field(r.method_b.str()) + ',' + csv_field(r.left_b) + ',' +
           csv_field(r.right_b) + ',' + csv_field(r.left_diff.render()) + ',' +
           csv_field(r.right_diff.render()) + '\n';
  }
  return out;
}

std::string to_csv(std::span<const DeltaYRow> rows) {
  std::string out =
      "row_id,situation,method_a,prediction_a,method_b,prediction_b,ground_truth,"
      "embedding_a,embedding_b\n";
  for (const auto& r : rows) {
    out += std::to_string(r.row_id) + ',' + std::string(to_string(r.situation)) + ',' +
           csv_field(r.method_a.str()) + ',' + std::to_string(to_code(r.prediction_a)) +
           ',' + csv_field(r.method_b.str()) + ',' +
           std::to_string(to_code(r.prediction_b)) + ',' +
           std::to_string(to_code(r.ground_truth)) + ',' +
           join_embedding(r.embedding_a) + ',' + join_embedding(r.embedding_b) + '\n';
  }
  return out;
}

std::string to_json(std::span<const XToYRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = Json::object();
    row["row_id"] = r.row_id;
    row["method"] = r.method.str();
    row["left_entry"] = r.left_entry;
    row["right_entry"] = r.right_entry;
    row["ground_truth"] = to_code(r.ground_truth);
    row["predicted"] = to_code(r.predicted);
    out.push_back(std::move(row));
  }
  return to_canonical_json(out);
}

std::string to_json(std::span<const DeltaXRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = Json::object();
    row["row_id"] = r.row_id;
    row["method_a"] = r.method_a.str();
    row["left_a"] = r.left_a;
    row["right_a"] = r.right_a;
    row["method_b"] = r.method_b.str();
    row["left_b"] = r.left_b;
    row["right_b"] = r.right_b;
    row["left_diff"] = diff_json(r.left_diff);
    row["right_diff"] = diff_json(r.right_diff);
    out.push_back(std::move(row));
  }
  return to_canonical_json(out);
}

std::string to_json(std::span<const DeltaYRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = Json::object();
    row["row_id"] = r.row_id;
    row["situation"] = std::string(to_string(r.situation));
    row["method_a"] = r.method_a.str();
    row["prediction_a"] = to_code(r.prediction_a);
    row["embedding_a"] = embedding_json(r.embedding_a);
    row["method_b"] = r.method_b.str();
    row["prediction_b"] = to_code(r.prediction_b);
    row["embedding_b"] = embedding_json(r.embedding_b);
    row["ground_truth"] = to_code(r.ground_truth);
    out.push_back(std::move(row));
  }
  return to_canonical_json(out);
}

}  // namespace ertrace
