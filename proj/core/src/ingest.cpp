#include "ertrace/ingest.hpp"

#include <algorithm>
#include <charconv>

#include "csv_reader.hpp"

namespace ertrace {
namespace {

constexpr const char* kSplits[] = {"train", "valid", "test"};

std::map<std::string, DataEntry> load_table(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingFile, "missing " + path.string());
  }
  const auto csv = detail::read_csv(path);
  const auto id_it = std::find(csv.header.begin(), csv.header.end(), "id");
  if (id_it == csv.header.end()) {
    throw Error(ErrorCode::kMalformed, path.filename().string() + " has no 'id' column");
  }
  const auto id_col = static_cast<std::size_t>(id_it - csv.header.begin());

  std::map<std::string, DataEntry> table;
  for (const auto& row : csv.rows) {
    DataEntry entry;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c != id_col) entry.columns.push_back({csv.header[c], row[c]});
    }
    try {
      check_entry(entry);
    } catch (const Error& e) {
      throw Error(e.code(), path.filename().string() + ": " + e.what());
    }
    if (!table.emplace(row[id_col], std::move(entry)).second) {
      throw Error(ErrorCode::kMalformed,
                  path.filename().string() + ": duplicate id '" + row[id_col] + "'");
    }
  }
  return table;
}

MatchLabel parse_label(const std::string& text, const std::string& where) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kNonBinaryLabel, where + ": label '" + text + "' is not 0 or 1");
  }
  try {
    return label_from_code(value);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
}

}  // namespace

PairedDataset load_magellan(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kMissingFile, "dataset directory " + dir.string() + " not found");
  }
  PairedDataset dataset;
  dataset.name = std::filesystem::absolute(dir).lexically_normal().filename().string();
  if (dataset.name.empty()) {
    dataset.name = std::filesystem::absolute(dir).lexically_normal().parent_path().filename().string();
  }
  dataset.left_table = load_table(dir / "tableA.csv");
  dataset.right_table = load_table(dir / "tableB.csv");

  for (const char* split : kSplits) {
    const auto path = dir / (std::string(split) + ".csv");
    if (!std::filesystem::exists(path)) continue;
    auto& refs = dataset.splits[split];
    if (std::filesystem::file_size(path) == 0) continue;
    const auto csv = detail::read_csv(path);
    if (csv.header != std::vector<std::string>{"ltable_id", "rtable_id", "label"}) {
      throw Error(ErrorCode::kMalformed,
                  path.filename().string() + ": header must be ltable_id,rtable_id,label");
    }
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
      const auto& row = csv.rows[i];
      const std::string where = path.filename().string() + " line " + std::to_string(i);
      if (!dataset.left_table.contains(row[0])) {
        throw Error(ErrorCode::kDanglingReference, where + ": unknown ltable_id '" + row[0] + "'");
      }
      if (!dataset.right_table.contains(row[1])) {
        throw Error(ErrorCode::kDanglingReference, where + ": unknown rtable_id '" + row[1] + "'");
      }
      refs.push_back({row[0], row[1], parse_label(row[2], where)});
    }
  }
  if (dataset.splits.empty()) {
    throw Error(ErrorCode::kMissingFile,
                dir.string() + " has none of train.csv, valid.csv, test.csv");
  }
  return dataset;
}

std::vector<CandidatePair> to_candidate_pairs(const PairedDataset& dataset,
                                              const std::string& split) {
  auto it = dataset.splits.find(split);
  if (it == dataset.splits.end()) {
    throw Error(ErrorCode::kUnknownSplit, "dataset has no split '" + split + "'");
  }
  std::vector<CandidatePair> pairs;
  pairs.reserve(it->second.size());
  for (std::size_t i = 0; i < it->second.size(); ++i) {
    const auto& ref = it->second[i];
    pairs.push_back({i, dataset.left_table.at(ref.left_id),
                     dataset.right_table.at(ref.right_id), ref.label});
  }
  return pairs;
}

}  // namespace ertrace
