#include "ertrace/serialize.hpp"

#include <algorithm>
#include <vector>

namespace ertrace {
namespace {

constexpr std::string_view kColMarker = "COL";
constexpr std::string_view kValMarker = "VAL";

struct Marker {
  std::size_t pos;
  bool is_col;
};

std::vector<Marker> find_markers(std::string_view text) {
  std::vector<Marker> markers;
  for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
    const auto token = text.substr(i, 3);
    const bool is_col = token == kColMarker;
    if (!is_col && token != kValMarker) continue;
    const bool left_ok = i == 0 || text[i - 1] == ' ';
    const bool right_ok = i + 3 == text.size() || text[i + 3] == ' ';
    if (left_ok && right_ok) markers.push_back({i, is_col});
  }
  return markers;
}

}  // namespace

std::string apply_column_prompt(std::string_view column_name,
                                const ColumnTypeAnnotation* annotation,
                                PromptStyle style) {
  std::string out(column_name);
  if (annotation != nullptr) {
    out += connector(style);
    out += annotation->semantic_type;
  }
  return out;
}

std::string apply_value_prompt(std::string_view value,
                               std::span<const EntityMentionAnnotation> mentions,
                               PromptStyle style) {
  std::vector<const EntityMentionAnnotation*> order;
  order.reserve(mentions.size());
  for (const auto& mention : mentions) {
    if (mention.start >= mention.end || mention.end > value.size()) {
      throw Error(ErrorCode::kAnnotationMismatch,
                  "mention span [" + std::to_string(mention.start) + ", " +
                      std::to_string(mention.end) + ") outside value");
    }
    order.push_back(&mention);
  }
  std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return a->start < b->start;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i]->start < order[i - 1]->end) {
      throw Error(ErrorCode::kOverlappingMentions,
                  "mentions '" + order[i - 1]->mention + "' and '" +
                      order[i]->mention + "' overlap");
    }
  }
  // Right to left, so earlier offsets stay valid.
  std::string out(value);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::string insertion(connector(style));
    insertion += (*it)->entity_type;
    out.insert((*it)->end, insertion);
  }
  return out;
}

SerializedEntry serialize_entry(const AnnotatedEntry& entry, PromptStyle style) {
  std::string text;
  for (const auto& column : entry.entry.columns) {
    if (!text.empty()) text += ' ';
    const auto mentions = entry.mentions_for(column.name);
    text += kColMarker;
    text += ' ';
    text += apply_column_prompt(column.name, entry.column_type(column.name), style);
    text += ' ';
    text += kValMarker;
    text += ' ';
    text += apply_value_prompt(column.value, mentions, style);
  }
  return {std::move(text), entry.method};
}

SerializedPair serialize_pair(RowId row_id, const AnnotatedEntry& left,
                              const AnnotatedEntry& right, PromptStyle style) {
  if (left.method != right.method) {
    throw Error(ErrorCode::kMethodMismatch,
                "pair sides come from methods '" + left.method.str() + "' and '" +
                    right.method.str() + "'");
  }
  auto left_text = serialize_entry(left, style).text;
  auto right_text = serialize_entry(right, style).text;
  std::string text = left_text + ' ' + right_text;
  return {std::move(text), std::move(left_text), std::move(right_text), row_id,
          left.method};
}

DataEntry parse_serialized(std::string_view text) {
  const auto markers = find_markers(text);
  if (markers.empty() || markers.front().pos != 0 || !markers.front().is_col) {
    throw Error(ErrorCode::kMalformed, "serialized text must start with 'COL '");
  }
  for (std::size_t i = 1; i < markers.size(); ++i) {
    if (markers[i].is_col == markers[i - 1].is_col) {
      throw Error(ErrorCode::kAmbiguousSerialization,
                  "reserved marker inside a column name or value at offset " +
                      std::to_string(markers[i].pos));
    }
  }
  if (markers.back().is_col) {
    throw Error(ErrorCode::kMalformed, "trailing COL without VAL");
  }

  DataEntry entry;
  for (std::size_t i = 0; i < markers.size(); i += 2) {
    const std::size_t name_begin = markers[i].pos + 4;
    const std::size_t val_pos = markers[i + 1].pos;
    const std::size_t value_begin = val_pos + 4;
    if (val_pos < name_begin + 1 || value_begin > text.size()) {
      throw Error(ErrorCode::kMalformed,
                  "malformed COL/VAL group at offset " + std::to_string(markers[i].pos));
    }
    const std::size_t value_end =
        i + 2 < markers.size() ? markers[i + 2].pos - 1 : text.size();
    if (value_end < value_begin) {
      throw Error(ErrorCode::kMalformed,
                  "malformed value at offset " + std::to_string(val_pos));
    }
    entry.columns.push_back(
        {std::string(text.substr(name_begin, val_pos - 1 - name_begin)),
         std::string(text.substr(value_begin, value_end - value_begin))});
  }
  return validate_entry(std::move(entry));
}

}  // namespace ertrace
