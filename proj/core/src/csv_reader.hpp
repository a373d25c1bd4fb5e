#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ertrace::detail {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// Comma-separated, double-quote quoting ("" escapes a quote), first record
// is the header. Cells are returned byte for byte: no trimming. Ragged rows
// and unterminated quotes raise kMalformed. A trailing newline at end of
// file does not produce an empty record; CRLF line ends are accepted.
CsvTable parse_csv(std::string_view text, std::string_view source_name);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace ertrace::detail
