#include "ertrace/analysis.hpp"
#include "ertrace/canonical_json.hpp"

namespace ertrace {
namespace {

using Json = nlohmann::ordered_json;

std::string average_text(const std::optional<double>& average) {
  return average ? format_float(*average) : "undefined";
}

std::string label_letter(MatchLabel predicted, MatchLabel truth) {
  return predicted == truth ? "T" : "F";
}

std::string html_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

template <typename Plain, typename Mark>
std::string with_marks(const RenderedEntry& entry, Plain plain, Mark mark) {
  std::string out;
  std::size_t pos = 0;
  for (const auto& span : entry.marks) {
    out += plain(std::string_view(entry.text).substr(pos, span.start - pos));
    out += mark(std::string_view(entry.text).substr(span.start, span.end - span.start));
    pos = span.end;
  }
  out += plain(std::string_view(entry.text).substr(pos));
  return out;
}

std::string bracket_marks(const RenderedEntry& entry) {
  return with_marks(
      entry, [](std::string_view s) { return std::string(s); },
      [](std::string_view s) { return "[[" + std::string(s) + "]]"; });
}

std::string html_marks(const RenderedEntry& entry) {
  return with_marks(
      entry, [](std::string_view s) { return html_escape(s); },
      [](std::string_view s) { return "<em>" + html_escape(s) + "</em>"; });
}

std::string marks_list(const RenderedEntry& entry) {
  std::string out;
  for (const auto& span : entry.marks) {
    if (!out.empty()) out += " | ";
    out += entry.text.substr(span.start, span.end - span.start);
  }
  return out;
}

std::string prediction_text(const MethodRendering& m) {
  if (!m.predicted) return "-";
  std::string out(to_string(*m.predicted));
  if (m.confidence) out += " (" + format_float(*m.confidence) + ")";
  return out;
}

[[noreturn]] void unsupported(std::string_view what) {
  throw Error(ErrorCode::kInvalidArgument,
              "format not supported for " + std::string(what));
}

}  // namespace

std::string render_agreement(const AgreementTable& t, ReportFormat format) {
  const struct {
    const char* a;
    const char* b;
    const Ratio& ratio;
  } cells[] = {{"T", "F", t.true_false}, {"F", "T", t.false_true}, {"T", "T", t.true_true}};

  switch (format) {
    case ReportFormat::kText: {
      std::string out = "Agreement: " + t.method_a.str() + " vs " + t.method_b.str() +
                        " (baseline " + t.baseline.str() + ", " +
                        std::to_string(t.total_rows) + " rows)\n";
      out += t.method_a.str() + "\t" + t.method_b.str() + "\tcount\tratio\n";
      for (const auto& cell : cells) {
        out += std::string(cell.a) + "\t" + cell.b + "\t" +
               std::to_string(cell.ratio.count) + "\t" + cell.ratio.render() + "\n";
      }
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out = "method_a,method_b,baseline,result_a,result_b,count,total,ratio\n";
      for (const auto& cell : cells) {
        out += csv_field(t.method_a.str()) + "," + csv_field(t.method_b.str()) + "," +
               csv_field(t.baseline.str()) + "," + cell.a + "," + cell.b + "," +
               std::to_string(cell.ratio.count) + "," + std::to_string(t.total_rows) +
               "," + cell.ratio.render() + "\n";
      }
      return out;
    }
    case ReportFormat::kJson: {
      Json doc = Json::object();
      doc["method_a"] = t.method_a.str();
      doc["method_b"] = t.method_b.str();
      doc["baseline"] = t.baseline.str();
      doc["total_rows"] = t.total_rows;
      Json list = Json::array();
      for (const auto& cell : cells) {
        Json row = Json::object();
        row["result_a"] = cell.a;
        row["result_b"] = cell.b;
        row["count"] = cell.ratio.count;
        row["ratio"] = cell.ratio.render();
        list.push_back(std::move(row));
      }
      doc["cells"] = std::move(list);
      return to_canonical_json(doc);
    }
    case ReportFormat::kHtml:
      break;
  }
  unsupported("agreement tables");
}

std::string render_similarity(const SimilarityByTest& report, ReportFormat format) {
  const SimilarityReport* tests[] = {&report.test_i, &report.test_ii};
  switch (format) {
    case ReportFormat::kText: {
      std::string out;
      for (const auto* test : tests) {
        out += std::string(to_string(test->test)) + ": " +
               std::to_string(test->rows.size()) + " rows, average cosine " +
               average_text(test->average) + "\n";
        for (MatchLabel truth : {MatchLabel::kMatch, MatchLabel::kNotMatch}) {
          out += "  ground truth " + std::to_string(to_code(truth)) + ": average " +
                 average_text(test->average_for(truth)) + "\n";
        }
        for (const auto& row : test->rows) {
          out += "  row " + std::to_string(row.row_id) + "\t" +
                 label_letter(row.prediction_a, row.ground_truth) + "\t" +
                 label_letter(row.prediction_b, row.ground_truth) + "\t" +
                 std::to_string(to_code(row.ground_truth)) + "\t" +
                 format_float(row.cosine) + "\n";
        }
      }
      const bool comparable = report.test_i.average && report.test_ii.average;
      out += "Test II >= Test I: ";
      out += comparable ? (*report.test_ii.average >= *report.test_i.average ? "yes" : "no")
                        : "undetermined";
      out += "\n";
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out = "test,row_id,result_a,result_b,ground_truth,cosine\n";
      for (const auto* test : tests) {
        for (const auto& row : test->rows) {
          out += std::string(to_string(test->test)) + "," + std::to_string(row.row_id) +
                 "," + label_letter(row.prediction_a, row.ground_truth) + "," +
                 label_letter(row.prediction_b, row.ground_truth) + "," +
                 std::to_string(to_code(row.ground_truth)) + "," +
                 format_float(row.cosine) + "\n";
        }
      }
      for (const auto* test : tests) {
        out += std::string(to_string(test->test)) + ",average,,,," +
               average_text(test->average) + "\n";
      }
      return out;
    }
    case ReportFormat::kJson: {
      Json doc = Json::array();
      for (const auto* test : tests) {
        Json item = Json::object();
        item["test"] = std::string(to_string(test->test));
        item["average"] = test->average ? Json(*test->average) : Json(nullptr);
        const auto match_avg = test->average_for(MatchLabel::kMatch);
        const auto non_avg = test->average_for(MatchLabel::kNotMatch);
        item["average_ground_truth_1"] = match_avg ? Json(*match_avg) : Json(nullptr);
        item["average_ground_truth_0"] = non_avg ? Json(*non_avg) : Json(nullptr);
        Json rows = Json::array();
        for (const auto& row : test->rows) {
          Json r = Json::object();
          r["row_id"] = row.row_id;
          r["result_a"] = label_letter(row.prediction_a, row.ground_truth);
          r["result_b"] = label_letter(row.prediction_b, row.ground_truth);
          r["ground_truth"] = to_code(row.ground_truth);
          r["cosine"] = row.cosine;
          rows.push_back(std::move(r));
        }
        item["rows"] = std::move(rows);
        doc.push_back(std::move(item));
      }
      return to_canonical_json(doc);
    }
    case ReportFormat::kHtml:
      break;
  }
  unsupported("similarity reports");
}

std::string render_case_studies(std::span<const CaseStudyReport> reports,
                                ReportFormat format) {
  switch (format) {
    case ReportFormat::kText: {
      std::string out;
      for (const auto& report : reports) {
        out += "Row " + std::to_string(report.row_id) + " (ground truth: " +
               std::string(to_string(report.ground_truth)) + ")\n";
        for (const auto& m : report.methods) {
          out += "  " + m.method.str() + ": predicted " + prediction_text(m) + "\n";
          out += "    left:  " + bracket_marks(m.left) + "\n";
          out += "    right: " + bracket_marks(m.right) + "\n";
        }
        out += "  notes: " + report.notes + "\n";
      }
      return out;
    }
    case ReportFormat::kCsv: {
      std::string out =
          "row_id,ground_truth,method,predicted,confidence,left_entry,right_entry,"
          "left_marked,right_marked,notes\n";
      for (const auto& report : reports) {
        for (const auto& m : report.methods) {
          out += std::to_string(report.row_id) + "," +
                 std::to_string(to_code(report.ground_truth)) + "," +
                 csv_field(m.method.str()) + "," +
                 (m.predicted ? std::to_string(to_code(*m.predicted)) : "") + "," +
                 (m.confidence ? format_float(*m.confidence) : "") + "," +
                 csv_field(m.left.text) + "," + csv_field(m.right.text) + "," +
                 csv_field(marks_list(m.left)) + "," + csv_field(marks_list(m.right)) +
                 "," + csv_field(report.notes) + "\n";
        }
      }
      return out;
    }
    case ReportFormat::kHtml: {
      std::string out;
      for (const auto& report : reports) {
        out += "<section class=\"case-study\" data-row=\"" +
               std::to_string(report.row_id) + "\">\n";
        out += "<h3>Row " + std::to_string(report.row_id) + "</h3>\n";
        out += "<p>Ground truth: " + std::string(to_string(report.ground_truth)) + "</p>\n";
        out += "<table>\n<tr><th>method</th><th>left entry</th><th>right entry</th>"
               "<th>predicted</th></tr>\n";
        for (const auto& m : report.methods) {
          out += "<tr><td>" + html_escape(m.method.str()) + "</td><td>" +
                 html_marks(m.left) + "</td><td>" + html_marks(m.right) + "</td><td>" +
                 html_escape(prediction_text(m)) + "</td></tr>\n";
        }
        out += "</table>\n<p class=\"notes\">" + html_escape(report.notes) + "</p>\n";
        out += "</section>\n";
      }
      return out;
    }
    case ReportFormat::kJson:
      break;
  }
  unsupported("case studies");
}

}  // namespace ertrace
