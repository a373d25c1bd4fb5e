#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ertrace/model.hpp"

namespace ertrace {

struct ColumnTypeAnnotation {
  std::string column_name;
  std::string semantic_type;

  friend bool operator==(const ColumnTypeAnnotation&,
                         const ColumnTypeAnnotation&) = default;
};

// [start, end) are byte offsets into the named column's value.
struct EntityMentionAnnotation {
  std::string column_name;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string mention;
  std::string entity_type;

  friend bool operator==(const EntityMentionAnnotation&,
                         const EntityMentionAnnotation&) = default;
};

struct AnnotatedEntry {
  DataEntry entry;
  std::vector<ColumnTypeAnnotation> column_types;
  std::vector<EntityMentionAnnotation> mentions;
  MethodId method;

  const ColumnTypeAnnotation* column_type(std::string_view column) const;
  std::vector<EntityMentionAnnotation> mentions_for(std::string_view column) const;

  friend bool operator==(const AnnotatedEntry&, const AnnotatedEntry&) = default;
};

// Column semantic typing and entity linking behind one interface.
// Implementations must be deterministic and safe to call concurrently.
class Annotator {
 public:
  virtual ~Annotator() = default;
  virtual std::vector<ColumnTypeAnnotation> annotate_columns(
      const DataEntry& entry) const = 0;
  virtual std::vector<EntityMentionAnnotation> annotate_entities(
      const DataEntry& entry) const = 0;
};

// Raises kAnnotationMismatch when an annotation names a missing column, a
// column is typed twice, or a span does not match the value it points
// into; kOverlappingMentions when two spans in one value overlap.
void check_annotations(const DataEntry& entry,
                       const std::vector<ColumnTypeAnnotation>& column_types,
                       const std::vector<EntityMentionAnnotation>& mentions);

// Runs the column annotator's typing and the entity annotator's linking
// over `entry`. A null annotator contributes nothing; with both null the
// result is the un-augmented entry. Annotator errors propagate unchanged.
AnnotatedEntry annotate(const DataEntry& entry, const Annotator* column_annotator,
                        const Annotator* entity_annotator, const MethodId& method);

struct DictionaryConfig {
  std::map<std::string, std::string> column_types;  // column name -> type
  std::map<std::string, std::string> mentions;      // mention text -> type

  friend bool operator==(const DictionaryConfig&, const DictionaryConfig&) = default;
};

// {"column_types": {...}, "mentions": {...}}; both keys optional.
DictionaryConfig load_dictionary_config(const std::filesystem::path& path);
DictionaryConfig parse_dictionary_config(const std::string& json_text);

// Columns are typed by exact name lookup. Mentions are found by scanning
// each value left to right and taking, at the first position where any
// configured text matches (ASCII case-insensitively), the longest match;
// scanning resumes after it, so spans never overlap. Output spans keep the
// value's original casing.
std::unique_ptr<Annotator> dictionary_annotator(DictionaryConfig config);

enum class AnnotatorKind { kColumn, kEntity };

// Client for an external annotation service speaking the JSON annotator
// protocol over HTTP POST. A column-kind client returns no mentions and an
// entity-kind client returns no column types.
std::unique_ptr<Annotator> remote_annotator(const std::string& endpoint,
                                            AnnotatorKind kind);

}  // namespace ertrace
