#include "ertrace/augment.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ertrace {
namespace {

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](char c) { return ascii_lower(c); });
  return out;
}

class DictionaryAnnotator final : public Annotator {
 public:
  explicit DictionaryAnnotator(DictionaryConfig config)
      : column_types_(std::move(config.column_types)) {
    for (const auto& [name, type] : column_types_) {
      if (name.empty()) {
        throw Error(ErrorCode::kInvalidConfig, "empty column name in dictionary");
      }
    }
    for (auto& [text, type] : config.mentions) {
      if (text.empty()) {
        throw Error(ErrorCode::kInvalidConfig, "empty mention text in dictionary");
      }
      mentions_.push_back({ascii_lower(text), std::move(type)});
    }
    // Longest first so the first hit at a position is the longest one.
    std::stable_sort(mentions_.begin(), mentions_.end(),
                     [](const auto& a, const auto& b) {
                       return a.folded.size() > b.folded.size();
                     });
  }

  std::vector<ColumnTypeAnnotation> annotate_columns(
      const DataEntry& entry) const override {
    std::vector<ColumnTypeAnnotation> out;
    for (const auto& column : entry.columns) {
      auto it = column_types_.find(column.name);
      if (it != column_types_.end()) out.push_back({column.name, it->second});
    }
    return out;
  }

  std::vector<EntityMentionAnnotation> annotate_entities(
      const DataEntry& entry) const override {
    std::vector<EntityMentionAnnotation> out;
    if (mentions_.empty()) return out;
    for (const auto& column : entry.columns) {
      const std::string folded = ascii_lower(column.value);
      std::size_t pos = 0;
      while (pos < folded.size()) {
        const Mention* hit = nullptr;
        for (const auto& mention : mentions_) {
          if (folded.compare(pos, mention.folded.size(), mention.folded) == 0) {
            hit = &mention;
            break;
          }
        }
        if (hit == nullptr) {
          ++pos;
          continue;
        }
        const std::size_t end = pos + hit->folded.size();
        out.push_back({column.name, pos, end, column.value.substr(pos, end - pos),
                       hit->type});
        pos = end;
      }
    }
    return out;
  }

 private:
  struct Mention {
    std::string folded;
    std::string type;
  };

  std::map<std::string, std::string> column_types_;
  std::vector<Mention> mentions_;
};

}  // namespace

const ColumnTypeAnnotation* AnnotatedEntry::column_type(
    std::string_view column) const {
  for (const auto& annotation : column_types) {
    if (annotation.column_name == column) return &annotation;
  }
  return nullptr;
}

std::vector<EntityMentionAnnotation> AnnotatedEntry::mentions_for(
    std::string_view column) const {
  std::vector<EntityMentionAnnotation> out;
  for (const auto& mention : mentions) {
    if (mention.column_name == column) out.push_back(mention);
  }
  return out;
}

void check_annotations(const DataEntry& entry,
                       const std::vector<ColumnTypeAnnotation>& column_types,
                       const std::vector<EntityMentionAnnotation>& mentions) {
  std::set<std::string_view> typed;
  for (const auto& annotation : column_types) {
    if (entry.find(annotation.column_name) == nullptr) {
      throw Error(ErrorCode::kAnnotationMismatch,
                  "column type for unknown column '" + annotation.column_name + "'");
    }
    if (annotation.semantic_type.empty()) {
      throw Error(ErrorCode::kAnnotationMismatch,
                  "empty semantic type for column '" + annotation.column_name + "'");
    }
    if (!typed.insert(annotation.column_name).second) {
      throw Error(ErrorCode::kAnnotationMismatch,
                  "column '" + annotation.column_name + "' typed more than once");
    }
  }

  std::map<std::string_view, std::vector<std::pair<std::size_t, std::size_t>>> spans;
  for (const auto& mention : mentions) {
    const Column* column = entry.find(mention.column_name);
    if (column == nullptr) {
      throw Error(ErrorCode::kAnnotationMismatch,
                  "mention in unknown column '" + mention.column_name + "'");
    }
    if (mention.start >= mention.end || mention.end > column->value.size() ||
        column->value.compare(mention.start, mention.end - mention.start,
                              mention.mention) != 0) {
      throw Error(ErrorCode::kAnnotationMismatch,
                  "mention '" + mention.mention + "' does not match column '" +
                      mention.column_name + "' at [" + std::to_string(mention.start) +
                      ", " + std::to_string(mention.end) + ")");
    }
    spans[mention.column_name].emplace_back(mention.start, mention.end);
  }
  for (auto& [column, list] : spans) {
    std::sort(list.begin(), list.end());
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i].first < list[i - 1].second) {
        throw Error(ErrorCode::kOverlappingMentions,
                    "overlapping mentions in column '" + std::string(column) + "'");
      }
    }
  }
}

AnnotatedEntry annotate(const DataEntry& entry, const Annotator* column_annotator,
                        const Annotator* entity_annotator, const MethodId& method) {
  check_entry(entry);
  AnnotatedEntry out{entry, {}, {}, method};
  if (column_annotator != nullptr) {
    out.column_types = column_annotator->annotate_columns(entry);
  }
  if (entity_annotator != nullptr) {
    out.mentions = entity_annotator->annotate_entities(entry);
  }
  check_annotations(out.entry, out.column_types, out.mentions);
  return out;
}

DictionaryConfig parse_dictionary_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("dictionary: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidConfig, "dictionary must be a JSON object");
  }
  DictionaryConfig config;
  const auto read_map = [&](const char* key, std::map<std::string, std::string>& into) {
    if (!doc.contains(key)) return;
    const auto& section = doc.at(key);
    if (!section.is_object()) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string("dictionary '") + key + "' must be an object");
    }
    for (const auto& [name, type] : section.items()) {
      if (!type.is_string() || type.get<std::string>().empty()) {
        throw Error(ErrorCode::kInvalidConfig,
                    std::string("dictionary '") + key + "." + name +
                        "' must be a non-empty string");
      }
      into.emplace(name, type.get<std::string>());
    }
  };
  read_map("column_types", config.column_types);
  read_map("mentions", config.mentions);
  for (const auto& [key, value] : doc.items()) {
    if (key != "column_types" && key != "mentions") {
      throw Error(ErrorCode::kInvalidConfig, "dictionary: unknown key '" + key + "'");
    }
  }
  return config;
}

DictionaryConfig load_dictionary_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open dictionary " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dictionary_config(buffer.str());
}

std::unique_ptr<Annotator> dictionary_annotator(DictionaryConfig config) {
  return std::make_unique<DictionaryAnnotator>(std::move(config));
}

}  // namespace ertrace
