#pragma once

#include <span>
#include <string>
#include <string_view>

#include "ertrace/augment.hpp"
#include "ertrace/model.hpp"

namespace ertrace {

struct SerializedEntry {
  std::string text;
  MethodId source_method;

  friend bool operator==(const SerializedEntry&, const SerializedEntry&) = default;
};

// `text` is left.text + " " + right.text. The sides are kept because the
// log stores them separately and the builtin matcher embeds each one.
// Model-specific special tokens are never part of the text.
struct SerializedPair {
  std::string text;
  std::string left;
  std::string right;
  RowId row_id = 0;
  MethodId method;

  friend bool operator==(const SerializedPair&, const SerializedPair&) = default;
};

// f(col, pt): "<name>", "<name> / <type>" or "<name> <type>".
std::string apply_column_prompt(std::string_view column_name,
                                const ColumnTypeAnnotation* annotation,
                                PromptStyle style);

// g(val, pt): every mention is followed in place by the connector and its
// entity type. Throws kOverlappingMentions or kAnnotationMismatch.
std::string apply_value_prompt(std::string_view value,
                               std::span<const EntityMentionAnnotation> mentions,
                               PromptStyle style);

// "COL <f> VAL <g>" per column, single-space joined, in column order.
SerializedEntry serialize_entry(const AnnotatedEntry& entry, PromptStyle style);

// Throws kMethodMismatch when the two sides come from different methods.
SerializedPair serialize_pair(RowId row_id, const AnnotatedEntry& left,
                              const AnnotatedEntry& right, PromptStyle style);

// Diagnostic inverse of serialize_entry. Prompt text stays folded into the
// recovered names and values. Throws kMalformed for text that is not a
// COL/VAL sequence and kAmbiguousSerialization when a payload carries a
// standalone COL or VAL token.
DataEntry parse_serialized(std::string_view text);

}  // namespace ertrace
