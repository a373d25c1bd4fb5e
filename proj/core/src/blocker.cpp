#include <cctype>
#include <set>
#include <unordered_map>

#include "ertrace/matcher.hpp"

namespace ertrace {
namespace {

std::set<std::string> normalized_tokens(std::string_view text) {
  std::set<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) tokens.insert(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      flush();
    } else if (!std::ispunct(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  flush();
  return tokens;
}

std::set<std::string> key_tokens(const DataEntry& entry,
                                 std::span<const std::string> key_columns,
                                 const char* side, std::size_t index) {
  std::set<std::string> tokens;
  for (std::size_t k = 0; k < key_columns.size(); ++k) {
    const Column* column = entry.find(key_columns[k]);
    if (column == nullptr) {
      throw Error(ErrorCode::kUnknownColumn,
                  std::string(side) + " entry " + std::to_string(index) +
                      " lacks key column '" + key_columns[k] + "'");
    }
    // Tokens are tagged with the key so overlap is per column.
    for (auto& token : normalized_tokens(column->value)) {
      tokens.insert(std::to_string(k) + '\x1f' + token);
    }
  }
  return tokens;
}

}  // namespace

std::vector<CandidatePair> block(std::span<const DataEntry> left_table,
                                 std::span<const DataEntry> right_table,
                                 std::span<const std::string> key_columns,
                                 std::size_t max_pairs) {
  std::vector<CandidatePair> pairs;
  if (key_columns.empty()) {
    for (const auto& left : left_table) {
      for (const auto& right : right_table) {
        if (pairs.size() >= max_pairs) return pairs;
        pairs.push_back({pairs.size(), left, right, std::nullopt});
      }
    }
    return pairs;
  }

  std::unordered_map<std::string, std::vector<std::size_t>> index;
  for (std::size_t r = 0; r < right_table.size(); ++r) {
    for (auto& token : key_tokens(right_table[r], key_columns, "right", r)) {
      index[token].push_back(r);
    }
  }
  for (std::size_t l = 0; l < left_table.size(); ++l) {
    std::set<std::size_t> matches;
    for (const auto& token : key_tokens(left_table[l], key_columns, "left", l)) {
      auto it = index.find(token);
      if (it != index.end()) matches.insert(it->second.begin(), it->second.end());
    }
    for (std::size_t r : matches) {
      if (pairs.size() >= max_pairs) {
        throw Error(ErrorCode::kBlockingOverflow,
                    "keyed blocking produced more than " + std::to_string(max_pairs) +
                        " pairs; tighten the key columns");
      }
      pairs.push_back({pairs.size(), left_table[l], right_table[r], std::nullopt});
    }
  }
  return pairs;
}

}  // namespace ertrace
