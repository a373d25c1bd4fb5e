#include "csv_reader.hpp"

#include <fstream>
#include <sstream>

#include "ertrace/error.hpp"

namespace ertrace::detail {

CsvTable parse_csv(std::string_view text, std::string_view source_name) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string cell;
  bool quoted = false;
  bool cell_was_quoted = false;
  std::size_t line = 1;

  const auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::kMalformed,
                 std::string(source_name) + ":" + std::to_string(line) + ": " + why);
  };
  const auto end_cell = [&] {
    record.push_back(std::move(cell));
    cell.clear();
    cell_was_quoted = false;
  };
  const auto end_record = [&] {
    end_cell();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        cell += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!cell.empty() || cell_was_quoted) throw malformed("quote inside unquoted cell");
        quoted = true;
        cell_was_quoted = true;
        break;
      case ',':
        end_cell();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        throw malformed("bare carriage return");
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (cell_was_quoted) throw malformed("text after closing quote");
        cell += c;
    }
  }
  if (quoted) throw malformed("unterminated quoted cell");
  if (!cell.empty() || cell_was_quoted || !record.empty()) end_record();

  if (records.empty()) throw Error(ErrorCode::kMalformed, std::string(source_name) + ": empty file");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw Error(ErrorCode::kMalformed,
                  std::string(source_name) + ": record " + std::to_string(r) + " has " +
                      std::to_string(records[r].size()) + " cells, header has " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), path.filename().string());
}

}  // namespace ertrace::detail
