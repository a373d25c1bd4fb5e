#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ertrace/error.hpp"

namespace ertrace {

using RowId = std::uint64_t;

struct Column {
  std::string name;
  std::string value;

  friend bool operator==(const Column&, const Column&) = default;
};

// One record: ordered (column, value) pairs. Order is significant because
// serialization is order-sensitive.
struct DataEntry {
  std::vector<Column> columns;

  const Column* find(std::string_view name) const;
  std::size_t size() const noexcept { return columns.size(); }

  friend bool operator==(const DataEntry&, const DataEntry&) = default;
};

// Returns the entry unchanged; throws kEmptyEntry or kDuplicateColumn.
DataEntry validate_entry(DataEntry entry);
void check_entry(const DataEntry& entry);

enum class MatchLabel : int { kNotMatch = 0, kMatch = 1 };

constexpr int to_code(MatchLabel label) noexcept {
  return static_cast<int>(label);
}
// Throws kNonBinaryLabel for anything but 0 or 1.
MatchLabel label_from_code(long long code);
std::string_view to_string(MatchLabel label);

// Identifier of an augmentation configuration ("original", "doduo", ...).
class MethodId {
 public:
  MethodId() = default;
  explicit MethodId(std::string name);

  const std::string& str() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  friend bool operator==(const MethodId&, const MethodId&) = default;
  friend auto operator<=>(const MethodId&, const MethodId&) = default;

 private:
  std::string name_;
};

enum class PromptStyle { kSlash, kSpace };

// " / " for kSlash, " " for kSpace.
std::string_view connector(PromptStyle style) noexcept;
std::string_view to_string(PromptStyle style) noexcept;
PromptStyle prompt_style_from_string(std::string_view name);

struct CandidatePair {
  RowId row_id = 0;
  DataEntry left;
  DataEntry right;
  std::optional<MatchLabel> ground_truth;

  friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

}  // namespace ertrace
