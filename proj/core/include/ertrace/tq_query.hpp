#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ertrace/provenance_log.hpp"
#include "ertrace/token_diff.hpp"

namespace ertrace {

// tq1: inputs and predicted result of one method, per row.
struct XToYRow {
  RowId row_id = 0;
  MethodId method;
  std::string left_entry;
  std::string right_entry;
  MatchLabel ground_truth = MatchLabel::kNotMatch;
  MatchLabel predicted = MatchLabel::kNotMatch;

  friend bool operator==(const XToYRow&, const XToYRow&) = default;
};

// tq2: the same row's inputs under two methods, with token diffs from
// method_a's rendering to method_b's.
struct DeltaXRow {
  RowId row_id = 0;
  MethodId method_a;
  std::string left_a;
  std::string right_a;
  MethodId method_b;
  std::string left_b;
  std::string right_b;
  TokenDiff left_diff;
  TokenDiff right_diff;

  friend bool operator==(const DeltaXRow&, const DeltaXRow&) = default;
};

enum class Situation { kDifferent, kSameCorrect };
std::string_view to_string(Situation situation) noexcept;

// tq3: predictions and embeddings of the same row under two methods.
struct DeltaYRow {
  RowId row_id = 0;
  MethodId method_a;
  MatchLabel prediction_a = MatchLabel::kNotMatch;
  std::vector<double> embedding_a;
  MethodId method_b;
  MatchLabel prediction_b = MatchLabel::kNotMatch;
  std::vector<double> embedding_b;
  MatchLabel ground_truth = MatchLabel::kNotMatch;
  Situation situation = Situation::kDifferent;

  friend bool operator==(const DeltaYRow&, const DeltaYRow&) = default;
};

// All queries expect a validated log set, return rows in row_id order and
// throw kUnknownMethod for a method without the needed log.

std::vector<XToYRow> x_to_y(const LogSet& logs, const MethodId& method);

// Joins the two methods' input logs on row id. Throws kRowSetMismatch if
// the row sets differ.
std::vector<DeltaXRow> delta_x(const LogSet& logs, const MethodId& method_a,
                               const MethodId& method_b);

// Rows where the two methods predict different labels.
std::vector<DeltaYRow> delta_y_diff(const LogSet& logs, const MethodId& method_a,
                                    const MethodId& method_b);

// Rows where both methods predict the ground truth; with a baseline, only
// those the baseline got wrong. Throws kUnknownBaseline if the baseline
// has no predicted log.
std::vector<DeltaYRow> delta_y_same_correct(const LogSet& logs,
                                            const MethodId& method_a,
                                            const MethodId& method_b,
                                            const std::optional<MethodId>& baseline);

std::string to_csv(std::span<const XToYRow> rows);
std::string to_csv(std::span<const DeltaXRow> rows);
std::string to_csv(std::span<const DeltaYRow> rows);
std::string to_json(std::span<const XToYRow> rows);
std::string to_json(std::span<const DeltaXRow> rows);
std::string to_json(std::span<const DeltaYRow> rows);

// RFC 4180 field quoting, used by every CSV emitter.
std::string csv_field(std::string_view text);

}  // namespace ertrace
